#include "coneglow/illumination.hpp"

#include "coneglow/lp.hpp"

#include <cmath>
#include <limits>

namespace coneglow {

namespace {

double polyhedral_norm(const Vec& v, NormId id) {
  switch (id) {
    case NormId::Sup:
      return sup_norm(v);
    case NormId::L1:
      return l1_norm(v);
    case NormId::Variation:
      return variation(v);
    case NormId::Euclid:
      return v.norm();
  }
  return 0.0;
}

void require_polyhedral(NormId id, const char* what) {
  if (id == NormId::Euclid) throw UnsupportedError(std::string(what) + ": Euclidean ball has no finite extreme-point set");
}

}  // namespace

bool illuminates_point(const Vec& z, const Vec& v, NormId id) {
  require_finite(z, "illuminates_point");
  require_finite(v, "illuminates_point");
  if (z.size() != v.size()) throw DomainError("illuminates_point: length mismatch");
  if (std::abs(norm(z, id) - 1.0) > 1e-12) throw DomainError("illuminates_point: z is not on the unit sphere");
  const double scale = v.cwiseAbs().maxCoeff();
  if (scale == 0.0) throw DomainError("illuminates_point: zero direction");

  if (id == NormId::Euclid) return z.dot(v) < 0.0;

  const Vec dir = v / scale;
  double t = 1.0;
  for (int k = 0; k <= 40; ++k, t *= 0.5) {
    if (polyhedral_norm(z + t * dir, id) < 1.0 - kPredicateSlack) return true;
  }
  return false;
}

IlluminationVerdict sup_criterion(const std::vector<Vec>& residuals) {
  IlluminationVerdict verdict;
  if (residuals.empty()) throw DomainError("sup_criterion: no residuals");
  const Index n = residuals.front().size();
  if (n < 1) throw DomainError("sup_criterion: empty residual");
  if (n > kMaxEnumerationDim) throw BudgetError("sup_criterion: dimension exceeds enumeration guard");

  const std::uint64_t patterns = std::uint64_t{1} << n;
  std::vector<Index> owner(patterns, -1);
  for (std::size_t i = 0; i < residuals.size(); ++i) {
    const Vec& r = residuals[i];
    if (r.size() != n) throw DomainError("sup_criterion: residual length mismatch");
    require_finite(r, "sup_criterion");
    const double slack = kPredicateSlack * std::max(1.0, sup_norm(r));
    std::uint64_t mask = 0;
    bool strict = true;
    for (Index j = 0; j < n; ++j) {
      if (std::abs(r(j)) <= slack) {
        strict = false;
        break;
      }
      if (r(j) < 0) mask |= std::uint64_t{1} << j;
    }
    if (strict && owner[mask] < 0) owner[mask] = static_cast<Index>(i);
  }

  verdict.covered = true;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    if (owner[mask] >= 0) {
      verdict.assignments.push_back({static_cast<Index>(mask), owner[mask]});
    } else if (verdict.covered) {
      verdict.covered = false;
      Vec z(n);
      for (Index j = 0; j < n; ++j) z(j) = (mask >> j) & 1u ? 1.0 : -1.0;
      verdict.uncovered_witness = std::move(z);
    }
  }
  return verdict;
}

HullCertificate interior_hull_certificate(const std::vector<Vec>& vectors) {
  if (vectors.empty()) throw DomainError("interior_hull_certificate: empty vector list");
  const Index n = vectors.front().size();
  const auto m = static_cast<Index>(vectors.size());
  Mat cols(n, m);
  for (Index i = 0; i < m; ++i) {
    if (vectors[i].size() != n) throw DomainError("interior_hull_certificate: length mismatch");
    require_finite(vectors[i], "interior_hull_certificate");
    cols.col(i) = vectors[i];
  }

  HullCertificate cert;
  cert.rank = numerical_rank(cols);

  // Variables (lambda_1..lambda_m, e), all free.
  LinearProgram lp;
  lp.objective = Vec::Zero(m + 1);
  lp.objective(m) = 1.0;
  lp.bounds.assign(m + 1, VarBound::Free);
  for (Index j = 0; j < n; ++j) {
    Vec row = Vec::Zero(m + 1);
    row.head(m) = cols.row(j).transpose();
    lp.equalities.push_back({std::move(row), 0.0});
  }
  Vec ones = Vec::Zero(m + 1);
  ones.head(m).setOnes();
  lp.equalities.push_back({std::move(ones), 1.0});
  for (Index i = 0; i < m; ++i) {
    Vec row = Vec::Zero(m + 1);
    row(i) = -1.0;
    row(m) = 1.0;
    lp.inequalities.push_back({std::move(row), 0.0});
  }

  const LpOutcome out = solve_lp(lp);
  cert.epsilon = out.status == LpStatus::Optimal ? out.value : -std::numeric_limits<double>::infinity();
  cert.inside = out.status == LpStatus::Optimal && cert.epsilon > kLpSlack && cert.rank == n;
  return cert;
}

bool ball_cover_criterion(const std::vector<Vec>& vectors, NormId id) {
  require_polyhedral(id, "ball_cover_criterion");
  if (vectors.empty()) return false;
  const auto n = static_cast<int>(vectors.front().size());
  for (const auto& v : vectors) {
    if (v.size() != n) throw DomainError("ball_cover_criterion: length mismatch");
    require_finite(v, "ball_cover_criterion");
  }
  for (const Vec& z : extreme_points(id, n)) {
    bool hit = false;
    for (const auto& v : vectors) {
      if (polyhedral_norm(z - v, id) < 1.0 - kPredicateSlack) {
        hit = true;
        break;
      }
    }
    if (!hit) return false;
  }
  return true;
}

IlluminationVerdict extreme_illumination(const std::vector<Vec>& residuals, NormId id) {
  require_polyhedral(id, "extreme_illumination");
  IlluminationVerdict verdict;
  if (residuals.empty()) throw DomainError("extreme_illumination: no residuals");
  const auto n = static_cast<int>(residuals.front().size());
  for (const auto& r : residuals)
    if (r.size() != n) throw DomainError("extreme_illumination: length mismatch");

  const auto points = extreme_points(id, n);
  verdict.covered = true;
  for (std::size_t k = 0; k < points.size(); ++k) {
    Index owner = -1;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
      if (residuals[i].cwiseAbs().maxCoeff() == 0.0) continue;
      if (illuminates_point(points[k], residuals[i], id)) {
        owner = static_cast<Index>(i);
        break;
      }
    }
    if (owner >= 0) {
      verdict.assignments.push_back({static_cast<Index>(k), owner});
    } else if (verdict.covered) {
      verdict.covered = false;
      verdict.uncovered_witness = points[k];
    }
  }
  return verdict;
}

}  // namespace coneglow
