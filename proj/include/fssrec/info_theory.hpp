#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "fssrec/error.hpp"

namespace fssrec {

inline double entropy_from_counts(std::span<const std::size_t> counts,
                                  std::size_t total) {
  if (total == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

// Shannon entropy (base 2) over the non-missing values of a dense-id
// column; -1 marks a missing cell.
inline double entropy(std::span<const int> values) {
  int max_id = -1;
  for (int v : values) max_id = std::max(max_id, v);
  std::vector<std::size_t> counts(static_cast<std::size_t>(max_id) + 1, 0);
  std::size_t total = 0;
  for (int v : values) {
    if (v < 0) continue;
    counts[static_cast<std::size_t>(v)]++;
    ++total;
  }
  if (total == 0) throw DataError("entropy of an entirely missing column");
  return entropy_from_counts(counts, total);
}

namespace detail {

// Joint counts over rows where the feature value is present. The class is
// assumed complete, but -1 class cells are skipped too for symmetry.
struct JointTable {
  std::vector<std::size_t> cells;  // x_count * c_count, row-major by x
  std::vector<std::size_t> x_marg;
  std::vector<std::size_t> c_marg;
  std::size_t total = 0;
  std::size_t x_count = 0;
  std::size_t c_count = 0;
};

inline JointTable joint_counts(std::span<const int> x, std::span<const int> c) {
  if (x.size() != c.size()) throw DataError("mutual information: column length mismatch");
  int max_x = -1, max_c = -1;
  for (int v : x) max_x = std::max(max_x, v);
  for (int v : c) max_c = std::max(max_c, v);
  JointTable t;
  t.x_count = static_cast<std::size_t>(max_x) + 1;
  t.c_count = static_cast<std::size_t>(max_c) + 1;
  t.cells.assign(t.x_count * t.c_count, 0);
  t.x_marg.assign(t.x_count, 0);
  t.c_marg.assign(t.c_count, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0 || c[i] < 0) continue;
    t.cells[static_cast<std::size_t>(x[i]) * t.c_count + static_cast<std::size_t>(c[i])]++;
    t.x_marg[static_cast<std::size_t>(x[i])]++;
    t.c_marg[static_cast<std::size_t>(c[i])]++;
    t.total++;
  }
  return t;
}

}  // namespace detail

// MI(X,C) = H(X) + H(C) - H(X,C) over the joint empirical distribution of
// complete pairs. Never negative up to rounding; clamped at 0.
inline double mutual_information(std::span<const int> x, std::span<const int> c) {
  const auto t = detail::joint_counts(x, c);
  if (t.total == 0) throw DataError("mutual information: no complete pairs");
  const double hx = entropy_from_counts(t.x_marg, t.total);
  const double hc = entropy_from_counts(t.c_marg, t.total);
  const double hxc = entropy_from_counts(t.cells, t.total);
  return std::max(0.0, hx + hc - hxc);
}

// SU(X,C) = 2 MI / (H(X) + H(C)), in [0,1]; 0 when both entropies vanish.
inline double symmetric_uncertainty(std::span<const int> x, std::span<const int> c) {
  const auto t = detail::joint_counts(x, c);
  if (t.total == 0) throw DataError("symmetric uncertainty: no complete pairs");
  const double hx = entropy_from_counts(t.x_marg, t.total);
  const double hc = entropy_from_counts(t.c_marg, t.total);
  if (hx + hc <= 0.0) return 0.0;
  const double hxc = entropy_from_counts(t.cells, t.total);
  const double mi = std::max(0.0, hx + hc - hxc);
  return std::min(1.0, 2.0 * mi / (hx + hc));
}

}  // namespace fssrec
