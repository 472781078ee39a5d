#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mefit {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Formula syntax or semantics error; carries the 0-based character
/// offset into the formula string where the problem was detected.
class FormulaError : public Error {
 public:
  FormulaError(const std::string& what, std::size_t position)
      : Error(what + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Dataset construction or CSV ingestion error.
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what) {}
};

}  // namespace mefit
