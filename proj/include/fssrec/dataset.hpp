#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "fssrec/error.hpp"

namespace fssrec {

enum class ColumnKind { numeric, nominal };

// One predictive attribute. Numeric columns keep their values in `numeric`
// with NaN marking a missing cell; nominal columns keep dense category ids
// in `nominal` with -1 marking a missing cell.
struct FeatureColumn {
  std::string name;
  ColumnKind kind = ColumnKind::numeric;
  std::vector<double> numeric;
  std::vector<int> nominal;
  std::vector<std::string> categories;  // nominal only, ids are indices here

  std::size_t size() const {
    return kind == ColumnKind::numeric ? numeric.size() : nominal.size();
  }

  bool missing(std::size_t row) const {
    return kind == ColumnKind::numeric ? std::isnan(numeric[row])
                                       : nominal[row] < 0;
  }
};

// A classification table: predictive columns plus one label per instance.
// Immutable by convention once built; every operation returns a new value.
struct Dataset {
  std::string name;
  std::vector<FeatureColumn> columns;   // predictive attributes only
  std::vector<int> class_labels;        // dense ids, one per instance
  std::vector<std::string> class_names;

  std::size_t instance_count() const { return class_labels.size(); }
  std::size_t feature_count() const { return columns.size(); }
  std::size_t class_count() const { return class_names.size(); }

  std::vector<std::size_t> class_histogram() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (int c : class_labels) counts[static_cast<std::size_t>(c)]++;
    return counts;
  }

  std::size_t classes_present() const {
    std::size_t n = 0;
    for (std::size_t c : class_histogram())
      if (c > 0) n++;
    return n;
  }
};

inline void validate(const Dataset& ds) {
  const std::size_t n = ds.instance_count();
  if (ds.columns.empty())
    throw DataError(ds.name + ": zero predictive features");
  if (ds.class_names.empty() || n == 0)
    throw DataError(ds.name + ": empty class column");
  for (const auto& col : ds.columns) {
    if (col.size() != n)
      throw DataError(ds.name + ": column '" + col.name + "' has " +
                      std::to_string(col.size()) + " values, expected " +
                      std::to_string(n));
    bool any_present = false;
    for (std::size_t i = 0; i < n && !any_present; ++i)
      any_present = !col.missing(i);
    if (!any_present)
      throw DataError(ds.name + ": column '" + col.name + "' is entirely missing");
  }
  for (int c : ds.class_labels)
    if (c < 0 || static_cast<std::size_t>(c) >= ds.class_names.size())
      throw DataError(ds.name + ": class label id out of range");
}

// NaN-aware cell equality so that missing == missing.
inline bool columns_equal(const FeatureColumn& a, const FeatureColumn& b) {
  if (a.name != b.name || a.kind != b.kind || a.categories != b.categories)
    return false;
  if (a.kind == ColumnKind::nominal) return a.nominal == b.nominal;
  if (a.numeric.size() != b.numeric.size()) return false;
  for (std::size_t i = 0; i < a.numeric.size(); ++i) {
    const bool ma = std::isnan(a.numeric[i]), mb = std::isnan(b.numeric[i]);
    if (ma != mb || (!ma && a.numeric[i] != b.numeric[i])) return false;
  }
  return true;
}

inline bool datasets_equal(const Dataset& a, const Dataset& b) {
  if (a.name != b.name || a.class_labels != b.class_labels ||
      a.class_names != b.class_names || a.columns.size() != b.columns.size())
    return false;
  for (std::size_t i = 0; i < a.columns.size(); ++i)
    if (!columns_equal(a.columns[i], b.columns[i])) return false;
  return true;
}

// Keep only the given predictive columns (canonicalized to ascending
// order); class labels and instance order are untouched.
inline Dataset project(const Dataset& ds, const std::vector<std::size_t>& keep) {
  if (keep.empty()) throw DataError(ds.name + ": projection onto empty feature set");
  std::set<std::size_t> wanted(keep.begin(), keep.end());
  for (std::size_t idx : wanted)
    if (idx >= ds.feature_count())
      throw DataError(ds.name + ": feature index " + std::to_string(idx) +
                      " out of range (have " + std::to_string(ds.feature_count()) + ")");
  Dataset out;
  out.name = ds.name;
  out.class_labels = ds.class_labels;
  out.class_names = ds.class_names;
  for (std::size_t idx : wanted) out.columns.push_back(ds.columns[idx]);
  return out;
}

// Row subset in the given order, schema (categories, names) preserved.
inline Dataset subset_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.name = ds.name;
  out.class_names = ds.class_names;
  out.class_labels.reserve(rows.size());
  for (std::size_t r : rows) out.class_labels.push_back(ds.class_labels[r]);
  out.columns.reserve(ds.columns.size());
  for (const auto& col : ds.columns) {
    FeatureColumn sub;
    sub.name = col.name;
    sub.kind = col.kind;
    sub.categories = col.categories;
    if (col.kind == ColumnKind::numeric) {
      sub.numeric.reserve(rows.size());
      for (std::size_t r : rows) sub.numeric.push_back(col.numeric[r]);
    } else {
      sub.nominal.reserve(rows.size());
      for (std::size_t r : rows) sub.nominal.push_back(col.nominal[r]);
    }
    out.columns.push_back(std::move(sub));
  }
  return out;
}

}  // namespace fssrec
