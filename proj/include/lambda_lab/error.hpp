#pragma once

#include <stdexcept>
#include <string>

namespace lambda_lab {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A precondition on the arguments was not met.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

// Computed data contradicts a proven statement.
class TheoremViolation : public Error {
  public:
    using Error::Error;
};

// The working precision (series terms or p-adic digits) is too small to decide.
class PrecisionError : public Error {
  public:
    using Error::Error;
};

// CRT reconstruction did not stabilise within the prime budget.
class BudgetExhausted : public Error {
  public:
    using Error::Error;
};

// An invariant that should be unreachable failed; results must not be used.
class InternalError : public Error {
  public:
    using Error::Error;
};

// Cache file missing, malformed, or failing its checks.
class CacheError : public Error {
  public:
    using Error::Error;
};

} // namespace lambda_lab
