#pragma once

#include "coneglow/core.hpp"

#include <cmath>
#include <string_view>
#include <vector>

namespace coneglow {

enum class NormId { Sup, L1, Euclid, Variation };

std::string_view to_string(NormId id);
NormId norm_from_string(std::string_view name);

template <typename Derived>
typename Derived::Scalar sup_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? typename Derived::Scalar(0) : v.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::Scalar l1_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.cwiseAbs().sum();
}

// max_i v_i - min_j v_j. Invariant under adding multiples of (1,...,1), so it is
// a norm on V0 and a seminorm on R^n.
template <typename Derived>
typename Derived::Scalar variation(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? typename Derived::Scalar(0) : v.maxCoeff() - v.minCoeff();
}

template <typename Derived>
typename Derived::Scalar norm(const Eigen::MatrixBase<Derived>& v, NormId id) {
  require_finite(v, "norm");
  switch (id) {
    case NormId::Sup:
      return sup_norm(v);
    case NormId::L1:
      return l1_norm(v);
    case NormId::Euclid:
      return v.norm();
    case NormId::Variation:
      if (v.size() == 0 || v(v.size() - 1) != 0)
        throw DomainError("norm: Variation requires the last entry to be zero");
      return variation(v);
  }
  throw DomainError("norm: unknown norm id");
}

// Hilbert's projective metric on the open positive cone. Ratios are taken as
// log differences so entries spanning e^{+-700} do not overflow.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar hilbert_metric(const Eigen::MatrixBase<DerivedX>& x,
                                         const Eigen::MatrixBase<DerivedY>& y) {
  require_positive(x, "hilbert_metric");
  require_positive(y, "hilbert_metric");
  if (x.size() != y.size()) throw DomainError("hilbert_metric: length mismatch");
  const auto diff = (x.array().log() - y.array().log()).eval();
  return diff.maxCoeff() - diff.minCoeff();
}

// Coordinatewise log of a point on the slice x_n = 1; lands in V0.
Vec log_coords(const Vec& x);

// Coordinatewise exp of a point in V0; lands on the slice x_n = 1.
Vec exp_coords(const Vec& y);

// x / x_n.
Vec normalize_last(const Vec& x);

// Largest dimension for which extreme points are enumerated.
inline constexpr int kMaxEnumerationDim = 24;

// Extreme points of the unit ball. For Variation, n is the ambient dimension and
// each returned vector has a zero last entry.
std::vector<Vec> extreme_points(NormId id, int n);

}  // namespace coneglow
