#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "fssrec/dataset.hpp"
#include "fssrec/discretize.hpp"
#include "fssrec/info_theory.hpp"
#include "fssrec/rng.hpp"
#include "fssrec/stats.hpp"

namespace fssrec {

// The candidate roster: merit/consistency evaluators under greedy forward
// and backward search, plus the three ranker-style methods. Tokens appear
// verbatim in the meta-DB file and on the command line.
enum class AlgorithmId : int {
  cfs_sfs = 0,
  cfs_sbs,
  cons_sfs,
  cons_sbs,
  fcbf,
  relieff,
  signific,
};

inline constexpr std::array<AlgorithmId, 7> kDefaultRoster = {
    AlgorithmId::cfs_sfs, AlgorithmId::cfs_sbs,  AlgorithmId::cons_sfs,
    AlgorithmId::cons_sbs, AlgorithmId::fcbf,    AlgorithmId::relieff,
    AlgorithmId::signific};

inline const char* to_token(AlgorithmId id) {
  switch (id) {
    case AlgorithmId::cfs_sfs: return "cfs-sfs";
    case AlgorithmId::cfs_sbs: return "cfs-sbs";
    case AlgorithmId::cons_sfs: return "cons-sfs";
    case AlgorithmId::cons_sbs: return "cons-sbs";
    case AlgorithmId::fcbf: return "fcbf";
    case AlgorithmId::relieff: return "relieff";
    case AlgorithmId::signific: return "signific";
  }
  return "?";
}

inline std::optional<AlgorithmId> algorithm_from_token(const std::string& token) {
  for (AlgorithmId id : kDefaultRoster)
    if (token == to_token(id)) return id;
  return std::nullopt;
}

// Fixed parameters from the experimental setup: the ranker significance
// threshold, the per-feature test level, and the ReliefF sampling knobs.
inline constexpr double kRelieffWeightThreshold = 0.01;
inline constexpr double kSignificAlpha = 0.01;
inline constexpr std::size_t kRelieffSampleCap = 250;
inline constexpr std::size_t kRelieffNeighbors = 10;
inline constexpr double kRuntimeFloorSeconds = 1e-6;

struct SelectionResult {
  std::vector<std::size_t> selected;  // ascending feature indices, nonempty
  double runtime_s = kRuntimeFloorSeconds;
  AlgorithmId algorithm = AlgorithmId::cfs_sfs;
};

namespace detail {

inline void require_nominal(const Dataset& ds, std::size_t feature) {
  if (ds.columns[feature].kind != ColumnKind::nominal)
    throw DataError(ds.name + ": column '" + ds.columns[feature].name +
                    "' is numeric; this evaluator needs the discretized view");
}

}  // namespace detail

// Fraction of instances not covered by the majority class of their
// projected value pattern. Missing cells act as a category of their own.
// The empty subset is allowed and gives the no-information baseline
// (one group, majority-class rule). Removing features can only merge
// groups, so the rate is monotone non-increasing in the subset.
inline double inconsistency_rate(const std::vector<std::size_t>& subset,
                                 const Dataset& ds) {
  for (std::size_t f : subset) detail::require_nominal(ds, f);
  const std::size_t n = ds.instance_count();
  const std::size_t t = ds.class_count();
  std::map<std::vector<int>, std::vector<std::size_t>> groups;
  std::vector<int> key(subset.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < subset.size(); ++j)
      key[j] = ds.columns[subset[j]].nominal[i];
    auto& counts = groups[key];
    if (counts.empty()) counts.assign(t, 0);
    counts[static_cast<std::size_t>(ds.class_labels[i])]++;
  }
  std::size_t inconsistent = 0;
  for (const auto& [pattern, counts] : groups) {
    const std::size_t size = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
    const std::size_t majority = *std::max_element(counts.begin(), counts.end());
    inconsistent += size - majority;
  }
  return static_cast<double>(inconsistent) / static_cast<double>(n);
}

// Correlation-based merit with symmetric uncertainty as the correlation:
//   merit = k * rcf / sqrt(k + k(k-1) * rff)
// where rcf is the mean feature-class SU and rff the mean pairwise SU
// inside the subset. Memoizes SU values so greedy searches stay cheap.
class CfsEvaluator {
 public:
  explicit CfsEvaluator(const Dataset& disc) : ds_(disc) {
    const std::size_t f = ds_.feature_count();
    su_fc_.assign(f, -1.0);
    su_ff_.assign(f, std::vector<double>(f, -1.0));
  }

  double feature_class_su(std::size_t f) const {
    if (su_fc_[f] < 0.0) {
      detail::require_nominal(ds_, f);
      su_fc_[f] = symmetric_uncertainty(ds_.columns[f].nominal, ds_.class_labels);
    }
    return su_fc_[f];
  }

  double feature_feature_su(std::size_t a, std::size_t b) const {
    if (su_ff_[a][b] < 0.0) {
      detail::require_nominal(ds_, a);
      detail::require_nominal(ds_, b);
      su_ff_[a][b] = su_ff_[b][a] =
          symmetric_uncertainty(ds_.columns[a].nominal, ds_.columns[b].nominal);
    }
    return su_ff_[a][b];
  }

  // Empty subsets rate 0: the no-feature baseline.
  double merit(const std::vector<std::size_t>& subset) const {
    const std::size_t k = subset.size();
    if (k == 0) return 0.0;
    double rcf = 0.0;
    for (std::size_t f : subset) rcf += feature_class_su(f);
    rcf /= static_cast<double>(k);
    double rff = 0.0;
    if (k > 1) {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
          rff += feature_feature_su(subset[a], subset[b]);
      rff /= static_cast<double>(k * (k - 1) / 2);
    }
    const double kd = static_cast<double>(k);
    const double denom = std::sqrt(kd + kd * (kd - 1.0) * rff);
    return denom > 0.0 ? kd * rcf / denom : 0.0;
  }

 private:
  const Dataset& ds_;
  mutable std::vector<double> su_fc_;
  mutable std::vector<std::vector<double>> su_ff_;
};

inline double cfs_merit(const std::vector<std::size_t>& subset, const Dataset& disc) {
  return CfsEvaluator(disc).merit(subset);
}

enum class SearchDirection { forward, backward };

// Greedy hill-climbing over feature subsets. Forward adds the candidate
// with the largest strict improvement; backward removes the candidate
// whose removal keeps the objective from strictly decreasing. Ties go to
// the lowest feature index; the result is never empty (top-1 singleton
// fallback when nothing improves on the empty set).
template <typename Objective>
std::vector<std::size_t> greedy_search(SearchDirection direction,
                                       std::size_t feature_count,
                                       Objective&& objective) {
  constexpr double kEps = 1e-12;
  std::vector<std::size_t> subset;
  if (direction == SearchDirection::forward) {
    double current = objective(subset);
    std::vector<bool> in(feature_count, false);
    while (true) {
      double best = current;
      std::size_t best_f = feature_count;
      for (std::size_t f = 0; f < feature_count; ++f) {
        if (in[f]) continue;
        subset.push_back(f);
        const double v = objective(subset);
        subset.pop_back();
        if (v > best + kEps) {
          best = v;
          best_f = f;
        }
      }
      if (best_f == feature_count) break;
      subset.push_back(best_f);
      in[best_f] = true;
      current = best;
      std::sort(subset.begin(), subset.end());
    }
    if (subset.empty()) {
      double best = -std::numeric_limits<double>::infinity();
      std::size_t best_f = 0;
      for (std::size_t f = 0; f < feature_count; ++f) {
        const double v = objective({f});
        if (v > best + kEps) {
          best = v;
          best_f = f;
        }
      }
      subset.push_back(best_f);
    }
    return subset;
  }

  subset.resize(feature_count);
  std::iota(subset.begin(), subset.end(), 0);
  double current = objective(subset);
  while (subset.size() > 1) {
    double best = -std::numeric_limits<double>::infinity();
    std::size_t best_pos = subset.size();
    for (std::size_t pos = 0; pos < subset.size(); ++pos) {
      std::vector<std::size_t> trial = subset;
      trial.erase(trial.begin() + static_cast<std::ptrdiff_t>(pos));
      const double v = objective(trial);
      if (v > best + kEps) {
        best = v;
        best_pos = pos;
      }
    }
    if (best_pos == subset.size() || best < current - kEps) break;
    subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(best_pos));
    current = std::max(current, best);
  }
  return subset;
}

// ReliefF attribute weights. Per seeded draw (with replacement): find the
// nearest hits and, per other class, the nearest prior-weighted misses;
// features that differ across classes and agree within them gain weight.
// Feature diff: |a-b|/range for numeric, 0/1 for nominal, 1 when either
// value is missing. When a class has fewer members than requested, the
// available ones are used and the average adjusts to the actual count.
inline std::vector<double> relieff_weights(const Dataset& ds, std::size_t sample_m,
                                           std::size_t neighbors_k, std::uint64_t seed) {
  const std::size_t n = ds.instance_count();
  const std::size_t f_count = ds.feature_count();
  if (neighbors_k < 1) throw DataError("relieff: neighbors_k must be >= 1");
  if (ds.classes_present() < 2) throw DataError("relieff: need at least 2 classes");

  std::vector<double> range(f_count, 0.0);
  for (std::size_t f = 0; f < f_count; ++f) {
    const auto& col = ds.columns[f];
    if (col.kind != ColumnKind::numeric) continue;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : col.numeric) {
      if (std::isnan(v)) continue;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi > lo) range[f] = hi - lo;
  }

  auto diff = [&](std::size_t f, std::size_t a, std::size_t b) -> double {
    const auto& col = ds.columns[f];
    if (col.missing(a) || col.missing(b)) return 1.0;
    if (col.kind == ColumnKind::numeric)
      return range[f] > 0.0 ? std::abs(col.numeric[a] - col.numeric[b]) / range[f] : 0.0;
    return col.nominal[a] == col.nominal[b] ? 0.0 : 1.0;
  };

  const auto histogram = ds.class_histogram();
  std::vector<double> prior(histogram.size());
  for (std::size_t c = 0; c < histogram.size(); ++c)
    prior[c] = static_cast<double>(histogram[c]) / static_cast<double>(n);

  std::vector<double> weights(f_count, 0.0);
  Rng rng(seed);
  std::vector<std::pair<double, std::size_t>> candidates;
  std::vector<double> group_avg(f_count);

  for (std::size_t s = 0; s < sample_m; ++s) {
    const std::size_t ref = static_cast<std::size_t>(rng.below(n));
    const int ref_class = ds.class_labels[ref];

    for (std::size_t cls = 0; cls < histogram.size(); ++cls) {
      if (histogram[cls] == 0) continue;
      candidates.clear();
      for (std::size_t j = 0; j < n; ++j) {
        if (j == ref || ds.class_labels[j] != static_cast<int>(cls)) continue;
        double d = 0.0;
        for (std::size_t f = 0; f < f_count; ++f) d += diff(f, ref, j);
        candidates.emplace_back(d, j);
      }
      if (candidates.empty()) continue;
      const std::size_t take = std::min(neighbors_k, candidates.size());
      std::partial_sort(candidates.begin(),
                        candidates.begin() + static_cast<std::ptrdiff_t>(take),
                        candidates.end());
      std::fill(group_avg.begin(), group_avg.end(), 0.0);
      for (std::size_t i = 0; i < take; ++i)
        for (std::size_t f = 0; f < f_count; ++f)
          group_avg[f] += diff(f, ref, candidates[i].second);
      for (double& v : group_avg) v /= static_cast<double>(take);

      const bool is_hit = static_cast<int>(cls) == ref_class;
      const double scale =
          is_hit ? -1.0
                 : prior[cls] / (1.0 - prior[static_cast<std::size_t>(ref_class)]);
      for (std::size_t f = 0; f < f_count; ++f)
        weights[f] += scale * group_avg[f] / static_cast<double>(sample_m);
    }
  }
  return weights;
}

// Fast correlation-based filter. Features are ranked by SU against the
// class; the relevance threshold is the SU of the floor(N/ln N)-th ranked
// feature (N = number of predictive features, rank clamped into [1, N]).
// A relevant feature is dropped when an earlier-ranked kept feature
// predicts it at least as well as it predicts the class.
inline std::vector<std::size_t> fcbf_select(const Dataset& disc) {
  const std::size_t f_count = disc.feature_count();
  std::vector<double> su(f_count);
  for (std::size_t f = 0; f < f_count; ++f) {
    detail::require_nominal(disc, f);
    su[f] = symmetric_uncertainty(disc.columns[f].nominal, disc.class_labels);
  }
  std::vector<std::size_t> order(f_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return su[a] > su[b]; });

  std::size_t threshold_rank = 1;
  if (f_count >= 2)
    threshold_rank = std::clamp<std::size_t>(
        static_cast<std::size_t>(std::floor(static_cast<double>(f_count) /
                                            std::log(static_cast<double>(f_count)))),
        1, f_count);
  const double threshold = su[order[threshold_rank - 1]];

  std::vector<std::size_t> kept;
  for (std::size_t f : order) {
    if (su[f] < threshold) break;
    bool dominated = false;
    for (std::size_t g : kept) {
      if (symmetric_uncertainty(disc.columns[g].nominal, disc.columns[f].nominal) >=
          su[f]) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(f);
  }
  if (kept.empty()) kept.push_back(order[0]);
  std::sort(kept.begin(), kept.end());
  return kept;
}

// Per-feature chi-square test of independence against the class over the
// complete pairs. Keeps features with p below alpha; when none qualify,
// the feature with the largest statistic is returned.
inline std::vector<std::size_t> significance_select(const Dataset& disc, double alpha) {
  const std::size_t f_count = disc.feature_count();
  std::vector<std::size_t> kept;
  double best_stat = -1.0;
  std::size_t best_f = 0;
  for (std::size_t f = 0; f < f_count; ++f) {
    detail::require_nominal(disc, f);
    const auto table = detail::joint_counts(disc.columns[f].nominal, disc.class_labels);
    double stat = 0.0;
    std::size_t rows = 0, cols = 0;
    for (std::size_t c : table.x_marg)
      if (c > 0) ++rows;
    for (std::size_t c : table.c_marg)
      if (c > 0) ++cols;
    if (rows >= 2 && cols >= 2 && table.total > 0) {
      for (std::size_t x = 0; x < table.x_count; ++x) {
        if (table.x_marg[x] == 0) continue;
        for (std::size_t c = 0; c < table.c_count; ++c) {
          if (table.c_marg[c] == 0) continue;
          const double expected = static_cast<double>(table.x_marg[x]) *
                                  static_cast<double>(table.c_marg[c]) /
                                  static_cast<double>(table.total);
          const double observed = static_cast<double>(table.cells[x * table.c_count + c]);
          stat += (observed - expected) * (observed - expected) / expected;
        }
      }
    }
    const double df = static_cast<double>((rows > 0 ? rows - 1 : 0) *
                                          (cols > 0 ? cols - 1 : 0));
    const double p = chi_square_sf(stat, df);
    if (df > 0 && p < alpha) kept.push_back(f);
    if (stat > best_stat) {
      best_stat = stat;
      best_f = f;
    }
  }
  if (kept.empty()) kept.push_back(best_f);
  return kept;
}

namespace detail {

inline bool needs_discretized(AlgorithmId id) {
  return id == AlgorithmId::cfs_sfs || id == AlgorithmId::cfs_sbs ||
         id == AlgorithmId::cons_sfs || id == AlgorithmId::cons_sbs ||
         id == AlgorithmId::fcbf || id == AlgorithmId::signific;
}

}  // namespace detail

// Runs one roster algorithm on a training split whose discretized view is
// already available; the wall clock covers the selection itself, so a
// shared discretization is not billed to any single algorithm. `seed`
// feeds the ReliefF sampling only.
inline SelectionResult select_on(AlgorithmId alg, const Dataset& train,
                                 const Dataset& train_disc, std::uint64_t seed) {
  if (train.feature_count() < 1)
    throw DataError(train.name + ": no predictive features to select from");
  if (train.classes_present() < 2)
    throw DataError(train.name + ": training split has a single class");

  const auto started = std::chrono::steady_clock::now();
  std::vector<std::size_t> selected;
  switch (alg) {
    case AlgorithmId::cfs_sfs:
    case AlgorithmId::cfs_sbs: {
      CfsEvaluator merit(train_disc);
      selected = greedy_search(alg == AlgorithmId::cfs_sfs ? SearchDirection::forward
                                                           : SearchDirection::backward,
                               train.feature_count(),
                               [&](const std::vector<std::size_t>& s) {
                                 return merit.merit(s);
                               });
      break;
    }
    case AlgorithmId::cons_sfs:
    case AlgorithmId::cons_sbs: {
      selected = greedy_search(alg == AlgorithmId::cons_sfs ? SearchDirection::forward
                                                            : SearchDirection::backward,
                               train.feature_count(),
                               [&](const std::vector<std::size_t>& s) {
                                 return -inconsistency_rate(s, train_disc);
                               });
      break;
    }
    case AlgorithmId::fcbf:
      selected = fcbf_select(train_disc);
      break;
    case AlgorithmId::relieff: {
      const auto weights = relieff_weights(
          train, std::min(train.instance_count(), kRelieffSampleCap),
          kRelieffNeighbors, seed);
      for (std::size_t f = 0; f < weights.size(); ++f)
        if (weights[f] > kRelieffWeightThreshold) selected.push_back(f);
      if (selected.empty()) {
        const std::size_t top = static_cast<std::size_t>(
            std::max_element(weights.begin(), weights.end()) - weights.begin());
        selected.push_back(top);
      }
      break;
    }
    case AlgorithmId::signific:
      selected = significance_select(train_disc, kSignificAlpha);
      break;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  SelectionResult result;
  result.selected = std::move(selected);
  result.runtime_s = std::max(elapsed, kRuntimeFloorSeconds);
  result.algorithm = alg;
  return result;
}

inline SelectionResult select(AlgorithmId alg, const Dataset& train,
                              std::uint64_t seed = 0) {
  if (detail::needs_discretized(alg)) return select_on(alg, train, mdl_discretize(train), seed);
  return select_on(alg, train, train, seed);
}

}  // namespace fssrec
