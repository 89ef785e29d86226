#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "fssrec/dataset.hpp"
#include "fssrec/error.hpp"
#include "fssrec/rng.hpp"

namespace fssrec {

// Stratified cross-validation assignments: for each pass, a fold index per
// instance. Portable across platforms for a fixed seed (see rng.hpp).
struct FoldPlan {
  int passes = 0;
  int folds = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> assignments;  // [pass][instance] -> fold

  std::vector<std::size_t> test_rows(int pass, int fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments[pass].size(); ++i)
      if (assignments[pass][i] == fold) rows.push_back(i);
    return rows;
  }
  std::vector<std::size_t> train_rows(int pass, int fold) const {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < assignments[pass].size(); ++i)
      if (assignments[pass][i] != fold) rows.push_back(i);
    return rows;
  }
};

// One pass: shuffle instance indices with a stream seeded from
// (seed, pass, attempt), regroup them by class, then deal the concatenated
// groups round-robin across folds. Each class run is contiguous, so every
// class lands within one instance of proportional in every fold.
// `attempt` lets callers redraw a pass that produced a degenerate split.
inline std::vector<int> stratified_pass_assignment(const Dataset& ds, int folds,
                                                   std::uint64_t seed, int pass,
                                                   int attempt = 0) {
  const std::size_t n = ds.instance_count();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(mix_seed(seed, static_cast<std::uint64_t>(pass),
                   static_cast<std::uint64_t>(attempt)));
  rng.shuffle(perm);

  std::vector<int> assignment(n, -1);
  std::size_t dealt = 0;
  for (std::size_t cls = 0; cls < ds.class_count(); ++cls) {
    for (std::size_t idx : perm) {
      if (ds.class_labels[idx] != static_cast<int>(cls)) continue;
      assignment[idx] = static_cast<int>(dealt % static_cast<std::size_t>(folds));
      ++dealt;
    }
  }
  return assignment;
}

inline FoldPlan stratified_folds(const Dataset& ds, int passes, int folds,
                                 std::uint64_t seed) {
  if (folds < 2) throw DataError(ds.name + ": need at least 2 folds");
  if (passes < 1) throw DataError(ds.name + ": need at least 1 pass");
  if (ds.instance_count() < static_cast<std::size_t>(folds))
    throw DataError(ds.name + ": " + std::to_string(ds.instance_count()) +
                    " instances cannot fill " + std::to_string(folds) + " folds");
  FoldPlan plan;
  plan.passes = passes;
  plan.folds = folds;
  plan.seed = seed;
  plan.assignments.reserve(passes);
  for (int p = 0; p < passes; ++p)
    plan.assignments.push_back(stratified_pass_assignment(ds, folds, seed, p));
  return plan;
}

}  // namespace fssrec
