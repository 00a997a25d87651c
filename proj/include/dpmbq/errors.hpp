#pragma once

#include <stdexcept>

namespace dpmbq {

// Malformed or inconsistent caller input. The CLI maps this to exit code 2.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numeric routine could not produce a usable result (e.g. a factorization
// that fails at the maximum permitted jitter). CLI exit code 3.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dpmbq
