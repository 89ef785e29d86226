#pragma once

#include <stdexcept>
#include <string>

namespace fssrec {

// Anything wrong with input data or files: parse failures, schema
// mismatches, broken invariants. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fssrec
