#pragma once

#include <stdexcept>
#include <string>

namespace wht {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (e.g. a tail mass
/// of 0 or 1 handed to a quantile).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The problem has no solution for these inputs, e.g. optimal weights
/// requested for a mean vector with no positive entry. Callers decide the
/// fallback.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// An input breaks a structural requirement of the error-control argument,
/// e.g. weights whose mean is not 1.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace wht
