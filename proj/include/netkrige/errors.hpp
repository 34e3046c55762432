#pragma once

#include <stdexcept>
#include <string>

namespace netkrige {

/// Input document could not be parsed or violates its schema. Exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 2;
};

/// Operands have incompatible shapes. Exit code 3.
class DimensionError : public std::runtime_error {
 public:
  explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 3;
};

/// A numerical routine failed (decomposition did not converge, etc.). Exit code 4.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 4;
};

/// A documented precondition of an operation was violated. Exit code 5.
class PreconditionError : public std::runtime_error {
 public:
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
  static constexpr int exit_code = 5;
};

}  // namespace netkrige
