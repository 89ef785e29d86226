#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fssrec/dataset.hpp"
#include "fssrec/error.hpp"

namespace fssrec {
namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string unquote(const std::string& s) {
  if (s.size() >= 2 && ((s.front() == '\'' && s.back() == '\'') ||
                        (s.front() == '"' && s.back() == '"')))
    return s.substr(1, s.size() - 2);
  return s;
}

// "inf"/"nan" are rejected: numeric cells must be finite, and NaN is the
// internal missing marker.
inline bool parse_number(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e && std::isfinite(out);
}

// Split on commas that are outside single/double quotes.
inline std::vector<std::string> split_csv_like(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  char quote = 0;
  for (char c : line) {
    if (quote) {
      if (c == quote) quote = 0;
      cur += c;
    } else if (c == '\'' || c == '"') {
      quote = c;
      cur += c;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

struct ArffAttr {
  std::string name;
  bool is_numeric = false;
  std::vector<std::string> values;  // nominal declaration order
};

}  // namespace detail

// Minimal ARFF reader: @relation, @attribute <name> numeric|{v1,...},
// @data, '?' for missing, '%' comments. The last declared attribute is the
// class. The dataset name is the file stem so that equivalent .arff and
// .csv files load to equal Datasets.
inline Dataset load_arff(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open file");

  auto fail = [&](std::size_t line_no, const std::string& what) -> void {
    throw DataError(path.filename().string() + ":" + std::to_string(line_no) +
                    ": " + what);
  };

  std::vector<detail::ArffAttr> attrs;
  std::unordered_set<std::string> seen_names;
  std::vector<std::vector<std::string>> raw_rows;
  bool in_data = false;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '%') continue;
    if (!in_data) {
      std::string low = detail::lower(t);
      if (low.rfind("@relation", 0) == 0) continue;
      if (low.rfind("@data", 0) == 0) {
        in_data = true;
        continue;
      }
      if (low.rfind("@attribute", 0) == 0) {
        std::string rest = detail::trim(t.substr(10));
        if (rest.empty()) fail(line_no, "malformed @attribute line");
        detail::ArffAttr attr;
        if (rest[0] == '\'' || rest[0] == '"') {
          const char q = rest[0];
          std::size_t close = rest.find(q, 1);
          if (close == std::string::npos) fail(line_no, "unterminated quoted attribute name");
          attr.name = rest.substr(1, close - 1);
          rest = detail::trim(rest.substr(close + 1));
        } else {
          std::size_t sp = rest.find_first_of(" \t");
          if (sp == std::string::npos) fail(line_no, "attribute '" + rest + "' has no type");
          attr.name = rest.substr(0, sp);
          rest = detail::trim(rest.substr(sp));
        }
        if (!seen_names.insert(attr.name).second)
          fail(line_no, "duplicate attribute name '" + attr.name + "'");
        std::string type = detail::lower(rest);
        if (type == "numeric" || type == "real" || type == "integer") {
          attr.is_numeric = true;
        } else if (!rest.empty() && rest.front() == '{') {
          if (rest.back() != '}') fail(line_no, "unterminated nominal value list");
          for (auto& v : detail::split_csv_like(rest.substr(1, rest.size() - 2))) {
            std::string val = detail::unquote(detail::trim(v));
            if (val.empty()) fail(line_no, "empty nominal value");
            attr.values.push_back(val);
          }
          if (attr.values.empty()) fail(line_no, "empty nominal value list");
        } else {
          fail(line_no, "unsupported attribute type '" + rest + "'");
        }
        attrs.push_back(std::move(attr));
        continue;
      }
      fail(line_no, "unexpected header line '" + t + "'");
    } else {
      auto fields = detail::split_csv_like(t);
      if (fields.size() != attrs.size())
        fail(line_no, "row has " + std::to_string(fields.size()) +
                          " values, expected " + std::to_string(attrs.size()));
      for (auto& f : fields) f = detail::unquote(detail::trim(f));
      raw_rows.push_back(std::move(fields));
    }
  }

  if (attrs.empty()) throw DataError(path.filename().string() + ": no @attribute declarations");
  if (attrs.size() < 2)
    throw DataError(path.filename().string() + ": zero predictive features (class attribute only)");
  if (!in_data) throw DataError(path.filename().string() + ": missing @data section");
  if (raw_rows.empty()) throw DataError(path.filename().string() + ": no data rows");

  Dataset ds;
  ds.name = path.stem().string();
  const std::size_t class_idx = attrs.size() - 1;
  const std::size_t n = raw_rows.size();

  for (std::size_t a = 0; a + 1 < attrs.size(); ++a) {
    FeatureColumn col;
    col.name = attrs[a].name;
    col.kind = attrs[a].is_numeric ? ColumnKind::numeric : ColumnKind::nominal;
    col.categories = attrs[a].values;
    if (col.kind == ColumnKind::numeric)
      col.numeric.reserve(n);
    else
      col.nominal.reserve(n);
    ds.columns.push_back(std::move(col));
  }

  // Class values: nominal declarations use declared ids; a numeric class is
  // mapped to categories in first-appearance order.
  std::unordered_map<std::string, int> class_ids;
  if (!attrs[class_idx].is_numeric) {
    ds.class_names = attrs[class_idx].values;
    for (std::size_t i = 0; i < ds.class_names.size(); ++i)
      class_ids[ds.class_names[i]] = static_cast<int>(i);
  }

  // Nominal value lookup per predictive attribute.
  std::vector<std::unordered_map<std::string, int>> value_ids(class_idx);
  for (std::size_t a = 0; a < class_idx; ++a)
    for (std::size_t i = 0; i < attrs[a].values.size(); ++i)
      value_ids[a][attrs[a].values[i]] = static_cast<int>(i);

  for (std::size_t r = 0; r < n; ++r) {
    const auto& fields = raw_rows[r];
    for (std::size_t a = 0; a < class_idx; ++a) {
      const std::string& f = fields[a];
      auto& col = ds.columns[a];
      if (f == "?") {
        if (col.kind == ColumnKind::numeric)
          col.numeric.push_back(std::numeric_limits<double>::quiet_NaN());
        else
          col.nominal.push_back(-1);
        continue;
      }
      if (col.kind == ColumnKind::numeric) {
        double v;
        if (!detail::parse_number(f, v))
          throw DataError(path.filename().string() + ": attribute '" + col.name +
                          "': cannot parse '" + f + "' as a number");
        col.numeric.push_back(v);
      } else {
        auto it = value_ids[a].find(f);
        if (it == value_ids[a].end())
          throw DataError(path.filename().string() + ": attribute '" + col.name +
                          "': undeclared nominal value '" + f + "'");
        col.nominal.push_back(it->second);
      }
    }
    const std::string& cls = fields[class_idx];
    if (cls == "?")
      throw DataError(path.filename().string() + ": missing class label in row " +
                      std::to_string(r + 1));
    if (attrs[class_idx].is_numeric) {
      double v;
      if (!detail::parse_number(cls, v))
        throw DataError(path.filename().string() + ": cannot parse class value '" + cls + "'");
      auto [it, inserted] = class_ids.try_emplace(cls, static_cast<int>(ds.class_names.size()));
      if (inserted) ds.class_names.push_back(cls);
      ds.class_labels.push_back(it->second);
    } else {
      auto it = class_ids.find(cls);
      if (it == class_ids.end())
        throw DataError(path.filename().string() + ": undeclared class value '" + cls + "'");
      ds.class_labels.push_back(it->second);
    }
  }

  validate(ds);
  return ds;
}

}  // namespace fssrec
