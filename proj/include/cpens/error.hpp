#pragma once

#include <stdexcept>
#include <string>

namespace cpens {

// Bad input data, schema mismatches, unreadable or incompatible model files.
// The CLI maps these to exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cpens
