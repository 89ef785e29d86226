#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fssrec/dataset.hpp"
#include "fssrec/discretize.hpp"
#include "fssrec/info_theory.hpp"

namespace fssrec {

inline constexpr std::size_t kMetaFeatureCount = 13;

// Flat names used in JSON reports and the meta-DB file, in vector order.
inline constexpr std::array<const char*, kMetaFeatureCount> kMetaFeatureNames = {
    "I",       "F",        "T",      "D",      "rho_bar", "skew_bar", "kurt_bar",
    "hc_norm", "hx_norm_bar", "mi_bar", "mi_max", "en_attr", "ns_ratio"};

// Replacement value for the entropy-over-information ratios when the mean
// mutual information vanishes; keeps every entry finite.
inline constexpr double kMiCap = 1e6;

// The 13 dataset characterization measures. `attribute_count` counts the
// class column too, so dimensionality = instances / (predictive + 1).
struct MetaFeatureVector {
  double instances = 0;        // I
  double attribute_count = 0;  // F, includes the class attribute
  double class_count = 0;      // T
  double dimensionality = 0;   // D = I/F
  double rho_bar = 0;          // mean |Pearson r| over numeric feature pairs
  double skew_bar = 0;         // mean skewness over numeric features
  double kurt_bar = 0;         // mean kurtosis over numeric features
  double hc_norm = 0;          // H(C) / log2(T)
  double hx_norm_bar = 0;      // mean H(X) / log2(#distinct values)
  double mi_bar = 0;           // mean MI(C, X)
  double mi_max = 0;           // max MI(C, X)
  double en_attr = 0;          // H(C) / mi_bar, capped
  double ns_ratio = 0;         // (mean H(X) - mi_bar) / mi_bar, capped

  std::array<double, kMetaFeatureCount> values() const {
    return {instances, attribute_count, class_count, dimensionality, rho_bar,
            skew_bar,  kurt_bar,        hc_norm,     hx_norm_bar,    mi_bar,
            mi_max,    en_attr,         ns_ratio};
  }

  static MetaFeatureVector from_values(const std::array<double, kMetaFeatureCount>& v) {
    MetaFeatureVector m;
    m.instances = v[0];
    m.attribute_count = v[1];
    m.class_count = v[2];
    m.dimensionality = v[3];
    m.rho_bar = v[4];
    m.skew_bar = v[5];
    m.kurt_bar = v[6];
    m.hc_norm = v[7];
    m.hx_norm_bar = v[8];
    m.mi_bar = v[9];
    m.mi_max = v[10];
    m.en_attr = v[11];
    m.ns_ratio = v[12];
    return m;
  }
};

struct Moments {
  double skewness = 0;
  double kurtosis = 0;
};

// Biased central moments (divide by n): skewness m3/m2^1.5, kurtosis
// m4/m2^2 (non-excess, Gaussian ~ 3). Zero variance yields (0, 0).
inline Moments moments(std::span<const double> column) {
  double sum = 0;
  std::size_t n = 0;
  for (double v : column) {
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  if (n == 0) return {};
  const double mean = sum / static_cast<double>(n);
  double m2 = 0, m3 = 0, m4 = 0;
  for (double v : column) {
    if (std::isnan(v)) continue;
    const double d = v - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m3 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  if (m2 <= 0.0) return {};
  return {m3 / std::pow(m2, 1.5), m4 / (m2 * m2)};
}

// Mean |Pearson r| over all unordered pairs of numeric predictive columns,
// each pair computed over its complete rows. Degenerate pairs (fewer than
// two complete rows or zero variance) contribute 0; fewer than two numeric
// columns yields 0.
inline double pearson_abs_mean(const Dataset& ds) {
  std::vector<const FeatureColumn*> numeric;
  for (const auto& col : ds.columns)
    if (col.kind == ColumnKind::numeric) numeric.push_back(&col);
  if (numeric.size() < 2) return 0.0;
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < numeric.size(); ++a) {
    for (std::size_t b = a + 1; b < numeric.size(); ++b) {
      ++pairs;
      const auto& xs = numeric[a]->numeric;
      const auto& ys = numeric[b]->numeric;
      double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isnan(xs[i]) || std::isnan(ys[i])) continue;
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        syy += ys[i] * ys[i];
        sxy += xs[i] * ys[i];
        ++n;
      }
      if (n < 2) continue;
      const double nd = static_cast<double>(n);
      const double vx = sxx - sx * sx / nd;
      const double vy = syy - sy * sy / nd;
      if (vx <= 0.0 || vy <= 0.0) continue;
      const double r = (sxy - sx * sy / nd) / std::sqrt(vx * vy);
      total += std::min(1.0, std::abs(r));
    }
  }
  return total / static_cast<double>(pairs);
}

// All 13 measures for one dataset. Statistical measures use the raw
// numeric columns; information-theoretic measures use the discretized view
// of numeric columns.
inline MetaFeatureVector extract(const Dataset& ds) {
  MetaFeatureVector m;
  const double n = static_cast<double>(ds.instance_count());
  m.instances = n;
  m.attribute_count = static_cast<double>(ds.feature_count() + 1);
  m.class_count = static_cast<double>(ds.class_count());
  m.dimensionality = n / m.attribute_count;

  std::size_t numeric_cols = 0;
  for (const auto& col : ds.columns) {
    if (col.kind != ColumnKind::numeric) continue;
    const Moments mm = moments(col.numeric);
    m.skew_bar += mm.skewness;
    m.kurt_bar += mm.kurtosis;
    ++numeric_cols;
  }
  if (numeric_cols > 0) {
    m.skew_bar /= static_cast<double>(numeric_cols);
    m.kurt_bar /= static_cast<double>(numeric_cols);
  }
  m.rho_bar = pearson_abs_mean(ds);

  const Dataset disc = mdl_discretize(ds);
  const double hc = entropy(ds.class_labels);
  m.hc_norm = ds.class_count() > 1
                  ? hc / std::log2(static_cast<double>(ds.class_count()))
                  : 0.0;

  double hx_sum = 0.0;      // un-normalized mean feature entropy feeds ns_ratio
  double hx_norm_sum = 0.0;
  for (const auto& col : disc.columns) {
    const double hx = entropy(col.nominal);
    std::set<int> distinct;
    for (int v : col.nominal)
      if (v >= 0) distinct.insert(v);
    hx_sum += hx;
    hx_norm_sum += distinct.size() > 1
                       ? hx / std::log2(static_cast<double>(distinct.size()))
                       : 0.0;
    const double mi = mutual_information(col.nominal, disc.class_labels);
    m.mi_bar += mi;
    m.mi_max = std::max(m.mi_max, mi);
  }
  const double f = static_cast<double>(disc.columns.size());
  hx_sum /= f;
  m.hx_norm_bar = hx_norm_sum / f;
  m.mi_bar /= f;

  if (m.mi_bar < 1e-12) {
    m.en_attr = kMiCap;
    m.ns_ratio = kMiCap;
  } else {
    m.en_attr = std::min(hc / m.mi_bar, kMiCap);
    m.ns_ratio = std::min((hx_sum - m.mi_bar) / m.mi_bar, kMiCap);
  }
  return m;
}

// Per-component min/max of a fitted collection; maps a vector into [0,1]
// by (f - min) / (max - min), clamping values outside the fitted range.
struct StandardizationRecord {
  std::array<double, kMetaFeatureCount> min{};
  std::array<double, kMetaFeatureCount> max{};

  std::array<double, kMetaFeatureCount> apply(const MetaFeatureVector& v) const {
    std::array<double, kMetaFeatureCount> out{};
    const auto raw = v.values();
    for (std::size_t p = 0; p < kMetaFeatureCount; ++p) {
      const double span = max[p] - min[p];
      out[p] = span > 0.0 ? std::clamp((raw[p] - min[p]) / span, 0.0, 1.0) : 0.0;
    }
    return out;
  }
};

inline std::pair<std::vector<std::array<double, kMetaFeatureCount>>, StandardizationRecord>
standardize(const std::vector<MetaFeatureVector>& vectors) {
  if (vectors.empty()) throw DataError("standardize: empty collection");
  StandardizationRecord rec;
  rec.min = rec.max = vectors.front().values();
  for (const auto& v : vectors) {
    const auto raw = v.values();
    for (std::size_t p = 0; p < kMetaFeatureCount; ++p) {
      rec.min[p] = std::min(rec.min[p], raw[p]);
      rec.max[p] = std::max(rec.max[p], raw[p]);
    }
  }
  std::vector<std::array<double, kMetaFeatureCount>> out;
  out.reserve(vectors.size());
  for (const auto& v : vectors) out.push_back(rec.apply(v));
  return {std::move(out), rec};
}

inline double l1_distance(const std::array<double, kMetaFeatureCount>& a,
                          const std::array<double, kMetaFeatureCount>& b) {
  double d = 0.0;
  for (std::size_t p = 0; p < kMetaFeatureCount; ++p) d += std::abs(a[p] - b[p]);
  return d;
}

}  // namespace fssrec
