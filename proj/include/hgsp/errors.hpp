#pragma once

#include <stdexcept>
#include <string>

namespace hgsp {

/// Invalid input: bad dimensions, malformed files, violated preconditions.
/// Maps to CLI exit code 1.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: non-convergence, singular systems, overflow.
/// Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hgsp
