#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "fssrec/error.hpp"

namespace fssrec {

// Relative importance of selection runtime (alpha) and selected-feature
// count (beta) against the accuracy ratio. Both default to 0: pure
// accuracy comparison.
struct EarrParams {
  double alpha = 0.0;
  double beta = 0.0;
};

// One algorithm's performance on one evaluation fold.
struct PerfTriple {
  double acc = 0;  // classification accuracy, in (0, 1]
  double t = 0;    // feature selection runtime, seconds, > 0
  int n = 0;       // number of selected features, >= 1
};

// The adjusted-ratio score of triple i against triple j:
//   (acc_i / acc_j) / (1 + alpha*log10(t_i/t_j) + beta*log10(n_i/n_j)).
// The denominator can reach zero or go negative for extreme ratios with
// large weights; it is floored at 0.1, which keeps scores positive and
// ordered by accuracy among floored pairs.
inline double pairwise_earr(const PerfTriple& i, const PerfTriple& j,
                            const EarrParams& p) {
  const double denom = 1.0 + p.alpha * std::log10(i.t / j.t) +
                       p.beta * std::log10(static_cast<double>(i.n) / j.n);
  return (i.acc / j.acc) / std::max(denom, 0.1);
}

// Arithmetic mean of the pairwise scores of `target` against every other
// algorithm in the roster.
inline double mean_earr(std::size_t target, std::span<const PerfTriple> triples,
                        const EarrParams& p) {
  if (triples.size() < 2) throw DataError("mean_earr: need at least 2 algorithms");
  double sum = 0.0;
  for (std::size_t j = 0; j < triples.size(); ++j)
    if (j != target) sum += pairwise_earr(triples[target], triples[j], p);
  return sum / static_cast<double>(triples.size() - 1);
}

// Per-algorithm mean scores within one fold; callers average these across
// all passes and folds.
inline std::vector<double> fold_earr_scores(std::span<const PerfTriple> fold_triples,
                                            const EarrParams& p) {
  std::vector<double> scores(fold_triples.size());
  for (std::size_t i = 0; i < fold_triples.size(); ++i)
    scores[i] = mean_earr(i, fold_triples, p);
  return scores;
}

}  // namespace fssrec
