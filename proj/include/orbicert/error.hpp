#pragma once

#include <stdexcept>

namespace orbicert {

/// Raised when an operation is called outside its documented domain
/// (bad index sets, degenerate inputs, unsupported parameters).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an input file or string cannot be parsed.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a randomized procedure runs out of its trial budget.
class SamplingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orbicert
