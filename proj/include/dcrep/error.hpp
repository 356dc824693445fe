#pragma once

#include <stdexcept>
#include <string>

namespace dcrep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Problem size outside the supported range (e.g. n > 12 partitions).
class SizeError : public Error {
 public:
  using Error::Error;
};

/// Parameter outside its mathematical domain, or malformed input.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: quadrature non-convergence, LP iteration guard, ...
class NumericalError : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace detail
}  // namespace dcrep
