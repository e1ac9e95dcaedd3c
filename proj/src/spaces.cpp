#include "coneglow/spaces.hpp"

#include <limits>
#include <string>

namespace coneglow {

std::string_view to_string(NormId id) {
  switch (id) {
    case NormId::Sup:
      return "sup";
    case NormId::L1:
      return "l1";
    case NormId::Euclid:
      return "euclid";
    case NormId::Variation:
      return "variation";
  }
  return "unknown";
}

NormId norm_from_string(std::string_view name) {
  if (name == "sup") return NormId::Sup;
  if (name == "l1") return NormId::L1;
  if (name == "euclid") return NormId::Euclid;
  if (name == "variation") return NormId::Variation;
  throw DomainError("unknown norm '" + std::string(name) + "'");
}

Vec log_coords(const Vec& x) {
  require_positive(x, "log_coords");
  if (x(x.size() - 1) != 1.0) throw DomainError("log_coords: last entry must equal 1 (normalize first)");
  Vec y = x.array().log().matrix();
  y(y.size() - 1) = 0.0;
  return y;
}

Vec exp_coords(const Vec& y) {
  require_finite(y, "exp_coords");
  if (y.size() == 0) throw DomainError("exp_coords: empty vector");
  if (y(y.size() - 1) != 0.0) throw DomainError("exp_coords: last entry must be zero");
  // log(DBL_MAX) ~ 709.78; beyond that the exponential is not representable.
  static const double kMaxLog = std::log(std::numeric_limits<double>::max());
  if (y.maxCoeff() > kMaxLog) throw OverflowError("exp_coords: entry too large, exponential overflows");
  Vec x = y.unaryExpr([](double t) { return std::exp(t); });
  if ((x.array() <= 0).any()) throw OverflowError("exp_coords: entry too small, exponential underflows to zero");
  x(x.size() - 1) = 1.0;
  return x;
}

Vec normalize_last(const Vec& x) {
  require_positive(x, "normalize_last");
  Vec out = x / x(x.size() - 1);
  out(out.size() - 1) = 1.0;
  return out;
}

std::vector<Vec> extreme_points(NormId id, int n) {
  if (n < 1) throw DomainError("extreme_points: dimension must be positive");
  if (n > kMaxEnumerationDim)
    throw BudgetError("extreme_points: dimension " + std::to_string(n) + " exceeds enumeration guard " +
                      std::to_string(kMaxEnumerationDim));
  std::vector<Vec> out;
  switch (id) {
    case NormId::Sup: {
      const std::uint64_t count = std::uint64_t{1} << n;
      out.reserve(count);
      for (std::uint64_t mask = 0; mask < count; ++mask) {
        Vec z(n);
        for (int j = 0; j < n; ++j) z(j) = (mask >> j) & 1u ? 1.0 : -1.0;
        out.push_back(std::move(z));
      }
      break;
    }
    case NormId::L1:
      out.reserve(2 * static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        out.push_back(Vec::Unit(n, j));
        out.push_back(-Vec::Unit(n, j));
      }
      break;
    case NormId::Variation: {
      if (n < 2) throw DomainError("extreme_points: Variation needs ambient dimension >= 2");
      const std::uint64_t count = std::uint64_t{1} << (n - 1);
      out.reserve(2 * (count - 1));
      for (int sign : {1, -1}) {
        for (std::uint64_t mask = 1; mask < count; ++mask) {
          Vec v = Vec::Zero(n);
          for (int j = 0; j < n - 1; ++j)
            if ((mask >> j) & 1u) v(j) = sign;
          out.push_back(std::move(v));
        }
      }
      break;
    }
    case NormId::Euclid:
      throw UnsupportedError("extreme_points: the Euclidean ball has no finite extreme-point set");
  }
  return out;
}

}  // namespace coneglow
