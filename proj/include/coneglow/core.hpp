#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace coneglow {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = Vector<double>;
using Mat = Matrix<double>;

// Error hierarchy. Every failure raised by the library derives from Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside an operation's domain (wrong sign, wrong length, NaN, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// A floating-point result left the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// An enumeration or size guard was exceeded.
class BudgetError : public Error {
 public:
  using Error::Error;
};

// An iterative method hit its iteration cap without terminating.
class NonterminationError : public Error {
 public:
  using Error::Error;
};

// The requested combination (e.g. a norm) is not supported by the operation.
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// A construction could not be carried out for the given data.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& v) {
  return v.allFinite();
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& v, const char* what) {
  if (!v.allFinite()) throw DomainError(std::string(what) + ": non-finite entry");
}

template <typename Derived>
void require_positive(const Eigen::MatrixBase<Derived>& v, const char* what) {
  require_finite(v, what);
  if (v.size() == 0) throw DomainError(std::string(what) + ": empty vector");
  if ((v.array() <= 0).any()) throw DomainError(std::string(what) + ": entries must be strictly positive");
}

}  // namespace coneglow
