#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "fssrec/arff.hpp"  // detail::parse_number / trim
#include "fssrec/dataset.hpp"
#include "fssrec/error.hpp"

namespace fssrec {

// Which CSV column carries the class: by 0-based index, by header name, or
// the last column (the default).
struct ClassColumnRef {
  std::optional<std::size_t> index;
  std::optional<std::string> name;

  static ClassColumnRef last() { return {}; }
  static ClassColumnRef by_index(std::size_t i) { return {i, std::nullopt}; }
  static ClassColumnRef by_name(std::string n) { return {std::nullopt, std::move(n)}; }
};

namespace detail {

// RFC 4180 records: quoted fields may contain commas, escaped quotes and
// newlines. Returns one row per record.
inline std::vector<std::vector<std::string>> parse_csv_records(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool any = false;
  char c;
  while (in.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get();
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && in.peek() == '\n') in.get();
      row.push_back(field);
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      any = false;
    } else {
      field += c;
    }
  }
  if (any || !field.empty() || !row.empty()) {
    row.push_back(field);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline bool csv_missing(const std::string& cell) { return cell.empty() || cell == "?"; }

}  // namespace detail

// Column kinds are inferred: a column whose non-missing cells all parse as
// numbers is numeric, anything else is nominal with categories assigned in
// first-appearance order.
inline Dataset load_csv(const std::filesystem::path& path, bool header = true,
                        ClassColumnRef class_column = ClassColumnRef::last()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path.string() + ": cannot open file");
  auto rows = detail::parse_csv_records(in);
  const std::string fname = path.filename().string();
  if (rows.empty()) throw DataError(fname + ": empty file");

  std::vector<std::string> names;
  std::size_t first_data = 0;
  const std::size_t width = rows[0].size();
  if (header) {
    for (auto& h : rows[0]) names.push_back(detail::trim(h));
    first_data = 1;
  } else {
    for (std::size_t i = 0; i < width; ++i) names.push_back("col" + std::to_string(i));
  }
  if (first_data >= rows.size()) throw DataError(fname + ": no data rows");
  for (std::size_t r = first_data; r < rows.size(); ++r)
    if (rows[r].size() != width)
      throw DataError(fname + ": row " + std::to_string(r + 1) + " has " +
                      std::to_string(rows[r].size()) + " cells, expected " +
                      std::to_string(width));
  if (width < 2) throw DataError(fname + ": zero predictive features (class column only)");

  std::size_t class_idx;
  if (class_column.index) {
    class_idx = *class_column.index;
    if (class_idx >= width)
      throw DataError(fname + ": class column index " + std::to_string(class_idx) +
                      " out of range");
  } else if (class_column.name) {
    auto it = std::find(names.begin(), names.end(), *class_column.name);
    if (it == names.end())
      throw DataError(fname + ": class column '" + *class_column.name + "' not found");
    class_idx = static_cast<std::size_t>(it - names.begin());
  } else {
    class_idx = width - 1;
  }

  const std::size_t n = rows.size() - first_data;
  Dataset ds;
  ds.name = path.stem().string();

  for (std::size_t c = 0; c < width; ++c) {
    if (c == class_idx) continue;
    bool all_numeric = true;
    bool any_value = false;
    for (std::size_t r = first_data; r < rows.size() && all_numeric; ++r) {
      const std::string cell = detail::trim(rows[r][c]);
      if (detail::csv_missing(cell)) continue;
      any_value = true;
      double v;
      all_numeric = detail::parse_number(cell, v);
    }
    FeatureColumn col;
    col.name = names[c];
    col.kind = (all_numeric && any_value) ? ColumnKind::numeric : ColumnKind::nominal;
    std::unordered_map<std::string, int> ids;
    for (std::size_t r = first_data; r < rows.size(); ++r) {
      const std::string cell = detail::trim(rows[r][c]);
      if (detail::csv_missing(cell)) {
        if (col.kind == ColumnKind::numeric)
          col.numeric.push_back(std::numeric_limits<double>::quiet_NaN());
        else
          col.nominal.push_back(-1);
        continue;
      }
      if (col.kind == ColumnKind::numeric) {
        double v;
        detail::parse_number(cell, v);
        col.numeric.push_back(v);
      } else {
        auto [it, inserted] = ids.try_emplace(cell, static_cast<int>(col.categories.size()));
        if (inserted) col.categories.push_back(cell);
        col.nominal.push_back(it->second);
      }
    }
    ds.columns.push_back(std::move(col));
  }

  std::unordered_map<std::string, int> class_ids;
  ds.class_labels.reserve(n);
  for (std::size_t r = first_data; r < rows.size(); ++r) {
    const std::string cell = detail::trim(rows[r][class_idx]);
    if (detail::csv_missing(cell))
      throw DataError(fname + ": missing class label in row " + std::to_string(r + 1));
    auto [it, inserted] = class_ids.try_emplace(cell, static_cast<int>(ds.class_names.size()));
    if (inserted) ds.class_names.push_back(cell);
    ds.class_labels.push_back(it->second);
  }

  validate(ds);
  return ds;
}

}  // namespace fssrec
