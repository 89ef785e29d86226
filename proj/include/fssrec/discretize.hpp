#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "fssrec/dataset.hpp"
#include "fssrec/info_theory.hpp"

namespace fssrec {
namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline double log2_pow3_minus_2(std::size_t k) {
  if (k == 0) return 0.0;
  const double p = std::pow(3.0, static_cast<double>(k));
  if (!std::isfinite(p)) return static_cast<double>(k) * std::log2(3.0);
  return std::log2(p - 2.0);
}

struct ValueGroup {
  double value;
  std::size_t begin, end;  // row range in the sorted pair array
};

// Recursive entropy-minimizing binary splitting with the minimum
// description length stopping rule. A split of S (N rows, k classes,
// entropy E) into S1/S2 is accepted iff
//   Gain > log2(N-1)/N + (log2(3^k - 2) - (k*E - k1*E1 - k2*E2)) / N.
// Candidates are boundaries between consecutive distinct values whose
// class sets differ; the best candidate is the one with maximal Gain,
// ties resolved toward the smaller cut value.
class MdlpSplitter {
 public:
  MdlpSplitter(std::vector<std::pair<double, int>> sorted_pairs, std::size_t class_count)
      : pairs_(std::move(sorted_pairs)), class_count_(class_count) {
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      if (i == 0 || pairs_[i].first != groups_.back().value)
        groups_.push_back({pairs_[i].first, i, i + 1});
      else
        groups_.back().end = i + 1;
    }
    // prefix[g][c] = count of class c in groups [0, g)
    prefix_.assign(groups_.size() + 1, std::vector<std::size_t>(class_count_, 0));
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      prefix_[g + 1] = prefix_[g];
      for (std::size_t r = groups_[g].begin; r < groups_[g].end; ++r)
        prefix_[g + 1][static_cast<std::size_t>(pairs_[r].second)]++;
    }
    // boundary_ok_[g]: a cut between group g and g+1 is a candidate
    boundary_ok_.assign(groups_.size() > 0 ? groups_.size() - 1 : 0, false);
    for (std::size_t g = 0; g + 1 < groups_.size(); ++g) {
      if (class_set(g) != class_set(g + 1)) {
        const double mid = (groups_[g].value + groups_[g + 1].value) / 2.0;
        boundary_ok_[g] = mid > groups_[g].value && mid < groups_[g + 1].value;
      }
    }
  }

  std::vector<double> cut_points() {
    std::vector<double> cuts;
    if (!groups_.empty()) split(0, groups_.size(), cuts);
    std::sort(cuts.begin(), cuts.end());
    return cuts;
  }

 private:
  std::vector<std::size_t> class_set(std::size_t g) const {
    std::vector<std::size_t> present;
    for (std::size_t c = 0; c < class_count_; ++c)
      if (prefix_[g + 1][c] > prefix_[g][c]) present.push_back(c);
    return present;
  }

  void range_stats(std::size_t g_lo, std::size_t g_hi, std::size_t& n,
                   std::size_t& k, double& ent) const {
    n = 0;
    k = 0;
    std::vector<std::size_t> counts(class_count_, 0);
    for (std::size_t c = 0; c < class_count_; ++c) {
      counts[c] = prefix_[g_hi][c] - prefix_[g_lo][c];
      n += counts[c];
      if (counts[c] > 0) ++k;
    }
    ent = entropy_from_counts(counts, n);
  }

  void split(std::size_t g_lo, std::size_t g_hi, std::vector<double>& cuts) {
    if (g_hi - g_lo < 2) return;
    std::size_t n, k;
    double ent;
    range_stats(g_lo, g_hi, n, k, ent);
    if (k < 2 || n < 2) return;

    double best_gain = -1.0;
    std::size_t best_g = 0;
    std::size_t best_k1 = 0, best_k2 = 0;
    double best_e1 = 0, best_e2 = 0;
    for (std::size_t g = g_lo; g + 1 < g_hi; ++g) {
      if (!boundary_ok_[g]) continue;
      std::size_t n1, k1, n2, k2;
      double e1, e2;
      range_stats(g_lo, g + 1, n1, k1, e1);
      range_stats(g + 1, g_hi, n2, k2, e2);
      const double gain =
          ent - (static_cast<double>(n1) * e1 + static_cast<double>(n2) * e2) /
                    static_cast<double>(n);
      if (gain > best_gain) {
        best_gain = gain;
        best_g = g;
        best_k1 = k1;
        best_k2 = k2;
        best_e1 = e1;
        best_e2 = e2;
      }
    }
    if (best_gain < 0.0) return;  // no usable candidate

    const double nd = static_cast<double>(n);
    const double delta = log2_pow3_minus_2(k) -
                         (static_cast<double>(k) * ent -
                          static_cast<double>(best_k1) * best_e1 -
                          static_cast<double>(best_k2) * best_e2);
    const double threshold = std::log2(nd - 1.0) / nd + delta / nd;
    if (best_gain <= threshold) return;

    cuts.push_back((groups_[best_g].value + groups_[best_g + 1].value) / 2.0);
    split(g_lo, best_g + 1, cuts);
    split(best_g + 1, g_hi, cuts);
  }

  std::vector<std::pair<double, int>> pairs_;
  std::size_t class_count_;
  std::vector<ValueGroup> groups_;
  std::vector<std::vector<std::size_t>> prefix_;
  std::vector<bool> boundary_ok_;
};

}  // namespace detail

// Accepted cut points for one numeric column, ascending. Missing cells are
// skipped. An empty result means the column collapses to one interval.
inline std::vector<double> mdl_cut_points(std::span<const double> values,
                                          std::span<const int> classes,
                                          std::size_t class_count) {
  std::vector<std::pair<double, int>> pairs;
  pairs.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i)
    if (!std::isnan(values[i])) pairs.emplace_back(values[i], classes[i]);
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return detail::MdlpSplitter(std::move(pairs), class_count).cut_points();
}

// Interval index for a value given ascending cuts; intervals are
// (-inf, c0], (c0, c1], ..., (c_{m-1}, +inf).
inline int interval_of(double v, const std::vector<double>& cuts) {
  return static_cast<int>(std::lower_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
}

// Replace every numeric column with a nominal column of interval ids;
// nominal columns pass through unchanged, as do missing cells. Idempotent:
// the output has no numeric columns left to split.
inline Dataset mdl_discretize(const Dataset& ds) {
  Dataset out;
  out.name = ds.name;
  out.class_labels = ds.class_labels;
  out.class_names = ds.class_names;
  out.columns.reserve(ds.columns.size());
  for (const auto& col : ds.columns) {
    if (col.kind == ColumnKind::nominal) {
      out.columns.push_back(col);
      continue;
    }
    const auto cuts = mdl_cut_points(col.numeric, ds.class_labels, ds.class_count());
    FeatureColumn disc;
    disc.name = col.name;
    disc.kind = ColumnKind::nominal;
    if (cuts.empty()) {
      disc.categories = {"all"};
    } else {
      disc.categories.push_back("(-inf.." + detail::format_double(cuts[0]) + "]");
      for (std::size_t i = 1; i < cuts.size(); ++i)
        disc.categories.push_back("(" + detail::format_double(cuts[i - 1]) + ".." +
                                  detail::format_double(cuts[i]) + "]");
      disc.categories.push_back("(" + detail::format_double(cuts.back()) + "..+inf)");
    }
    disc.nominal.reserve(col.numeric.size());
    for (double v : col.numeric)
      disc.nominal.push_back(std::isnan(v) ? -1 : interval_of(v, cuts));
    out.columns.push_back(std::move(disc));
  }
  return out;
}

}  // namespace fssrec
