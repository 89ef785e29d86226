#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "fssrec/error.hpp"

namespace fssrec {
namespace detail {

// Regularized incomplete gamma functions, series/continued-fraction split
// at x = a+1 (Lentz's method for the fraction). Converges well past the
// 1e-10 absolute accuracy the p-values need.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace detail

// Q(a, x) = 1 - P(a, x), the upper regularized incomplete gamma function.
inline double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw DataError("gamma_q: domain error");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_contfrac(a, x);
}

// Upper tail of the chi-square distribution with df degrees of freedom.
// df <= 0 is the degenerate no-information case and yields 1.
inline double chi_square_sf(double x, double df) {
  if (df <= 0.0) return 1.0;
  if (x <= 0.0) return 1.0;
  return gamma_q(df / 2.0, x / 2.0);
}

inline double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// Within-block ranks with rank 1 for the HIGHEST score; tied scores share
// the average of the ranks they span.
inline std::vector<double> ranks_descending(const std::vector<double>& scores) {
  const std::size_t m = scores.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<double> ranks(m, 0.0);
  std::size_t i = 0;
  while (i < m) {
    std::size_t j = i;
    while (j + 1 < m && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

struct FriedmanResult {
  double statistic = 0;
  double p_value = 1;
  std::vector<double> mean_ranks;  // per treatment, lower = better
  std::size_t blocks = 0;
  std::size_t treatments = 0;

  bool rejects(double level) const { return p_value < level; }
};

// Friedman rank test over a blocks x treatments score matrix (higher score
// = better). Statistic: [12B / (Mt(Mt+1))] * [sum R_j^2 - Mt(Mt+1)^2/4],
// chi-square with Mt-1 degrees of freedom.
inline FriedmanResult friedman_test(const std::vector<std::vector<double>>& blocks) {
  if (blocks.size() < 2) throw DataError("friedman_test: need at least 2 blocks");
  const std::size_t mt = blocks.front().size();
  if (mt < 2) throw DataError("friedman_test: need at least 2 treatments");
  for (const auto& b : blocks)
    if (b.size() != mt) throw DataError("friedman_test: ragged score matrix");

  FriedmanResult res;
  res.blocks = blocks.size();
  res.treatments = mt;
  res.mean_ranks.assign(mt, 0.0);
  for (const auto& b : blocks) {
    const auto r = ranks_descending(b);
    for (std::size_t j = 0; j < mt; ++j) res.mean_ranks[j] += r[j];
  }
  for (double& r : res.mean_ranks) r /= static_cast<double>(res.blocks);

  const double bd = static_cast<double>(res.blocks);
  const double md = static_cast<double>(mt);
  double sum_sq = 0.0;
  for (double r : res.mean_ranks) sum_sq += r * r;
  res.statistic = std::max(
      0.0, 12.0 * bd / (md * (md + 1.0)) * (sum_sq - md * (md + 1.0) * (md + 1.0) / 4.0));
  res.p_value = chi_square_sf(res.statistic, md - 1.0);
  return res;
}

// Step-down Holm comparison of every treatment against the one with the
// lowest mean rank. z_j = (R_j - R_best) / sqrt(Mt(Mt+1)/(6B)); one-sided
// p-values in ascending order are tested against level/(Mt-i). Returns the
// treatments NOT significantly worse than the best (the best included),
// ascending by index.
inline std::vector<std::size_t> holm_vs_best(const std::vector<double>& mean_ranks,
                                             std::size_t block_count, double level) {
  const std::size_t mt = mean_ranks.size();
  if (mt < 2) throw DataError("holm_vs_best: need at least 2 treatments");
  const std::size_t best =
      static_cast<std::size_t>(std::min_element(mean_ranks.begin(), mean_ranks.end()) -
                               mean_ranks.begin());
  const double se = std::sqrt(static_cast<double>(mt) * (static_cast<double>(mt) + 1.0) /
                              (6.0 * static_cast<double>(block_count)));

  struct Comparison {
    std::size_t treatment;
    double p;
  };
  std::vector<Comparison> comps;
  comps.reserve(mt - 1);
  for (std::size_t j = 0; j < mt; ++j) {
    if (j == best) continue;
    comps.push_back({j, normal_sf((mean_ranks[j] - mean_ranks[best]) / se)});
  }
  std::sort(comps.begin(), comps.end(), [](const Comparison& a, const Comparison& b) {
    return a.p < b.p;
  });

  std::vector<std::size_t> keep{best};
  bool stopped = false;
  for (std::size_t i = 0; i < comps.size(); ++i) {
    const double threshold = level / static_cast<double>(mt - 1 - i);
    if (!stopped && comps[i].p < threshold) continue;  // rejected: worse than best
    stopped = true;
    keep.push_back(comps[i].treatment);
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace fssrec
