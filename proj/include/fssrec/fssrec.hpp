#pragma once

// Umbrella header for the whole toolkit.

#include "fssrec/arff.hpp"
#include "fssrec/csv.hpp"
#include "fssrec/dataset.hpp"
#include "fssrec/discretize.hpp"
#include "fssrec/earr.hpp"
#include "fssrec/error.hpp"
#include "fssrec/evalharness.hpp"
#include "fssrec/folds.hpp"
#include "fssrec/info_theory.hpp"
#include "fssrec/learners.hpp"
#include "fssrec/metadb.hpp"
#include "fssrec/metafeatures.hpp"
#include "fssrec/recommender.hpp"
#include "fssrec/rng.hpp"
#include "fssrec/selectors.hpp"
#include "fssrec/stats.hpp"
