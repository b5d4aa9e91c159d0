#pragma once

#include <stdexcept>
#include <string>

namespace ftq {

// Bad input: wrong dimensions, out-of-range parameters, infeasible
// allocations. The CLI maps these to exit status 2.
class ValidationError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// A computation that could not produce a trustworthy number (non-PSD
// intermediate, degenerate denominator, failed bracket). CLI exit status 3.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace ftq
