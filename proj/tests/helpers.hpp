#pragma once

// Shared builders for hand-made datasets and temp files used across the
// test suites.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fssrec/dataset.hpp"

namespace testutil {

inline fssrec::FeatureColumn numeric_column(std::string name, std::vector<double> values) {
  fssrec::FeatureColumn col;
  col.name = std::move(name);
  col.kind = fssrec::ColumnKind::numeric;
  col.numeric = std::move(values);
  return col;
}

inline fssrec::FeatureColumn nominal_column(std::string name, std::vector<int> values,
                                            int category_count) {
  fssrec::FeatureColumn col;
  col.name = std::move(name);
  col.kind = fssrec::ColumnKind::nominal;
  col.nominal = std::move(values);
  for (int i = 0; i < category_count; ++i)
    col.categories.push_back("v" + std::to_string(i));
  return col;
}

inline fssrec::Dataset make_dataset(std::string name,
                                    std::vector<fssrec::FeatureColumn> columns,
                                    std::vector<int> labels, int class_count) {
  fssrec::Dataset ds;
  ds.name = std::move(name);
  ds.columns = std::move(columns);
  ds.class_labels = std::move(labels);
  for (int i = 0; i < class_count; ++i) ds.class_names.push_back("c" + std::to_string(i));
  return ds;
}

// Writes content to a fresh file under the system temp directory.
class TempFile {
 public:
  TempFile(const std::string& stem, const std::string& extension,
           const std::string& content) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            (stem + "_" + std::to_string(++counter) + extension);
    std::ofstream out(path_);
    out << content;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(FSSREC_DATA_DIR) / name;
}

}  // namespace testutil
