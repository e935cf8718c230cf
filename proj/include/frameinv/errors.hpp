#pragma once

#include <stdexcept>
#include <string>

namespace frameinv {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (bad size, parameter out of range, unknown name).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A linear system or factorization could not be solved to the required accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace frameinv
