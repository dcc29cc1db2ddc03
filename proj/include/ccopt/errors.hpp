#pragma once

#include <stdexcept>
#include <string>

namespace ccopt {

// Parameter outside its mathematical domain (negative rate, probability
// outside [0,1], r > n, ...).
class ParameterError : public std::invalid_argument {
 public:
  explicit ParameterError(const std::string& msg) : std::invalid_argument(msg) {}
};

// A truncated series was cut off while the neglected tail still carried
// more mass than the requested tolerance.
class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A computed value failed a requested numeric tolerance.
class ToleranceError : public std::runtime_error {
 public:
  explicit ToleranceError(const std::string& msg) : std::runtime_error(msg) {}
};

// The discretization grid is too small to hold the required probability mass.
class GridError : public std::runtime_error {
 public:
  explicit GridError(const std::string& msg) : std::runtime_error(msg) {}
};

// An iterative solver ran out of iterations.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& msg, double residual)
      : std::runtime_error(msg), residual(residual) {}
  double residual;
};

// Malformed or semantically invalid run configuration.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ccopt
