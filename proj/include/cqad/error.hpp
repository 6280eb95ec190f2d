#pragma once

#include <stdexcept>
#include <string>

namespace cqad {

/// Bad input: violated precondition, invalid parameters, malformed config.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation failed after its inputs were accepted (integrator step
/// underflow, invariant violation, singular Jacobian, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cqad
