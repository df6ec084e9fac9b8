#pragma once

#include <stdexcept>

namespace fmmde {

/// Malformed input data or an invalid configuration (CLI exit status 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure: rank deficiency, non-convergence, broken invariants
/// (CLI exit status 1).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fmmde
