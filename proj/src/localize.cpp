#include "coneglow/localize.hpp"

#include "coneglow/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coneglow {

std::string_view to_string(BallMetric metric) {
  switch (metric) {
    case BallMetric::Sup:
      return "sup";
    case BallMetric::L1:
      return "l1";
    case BallMetric::Euclid:
      return "euclid";
    case BallMetric::Variation:
      return "variation";
    case BallMetric::Hilbert:
      return "hilbert";
  }
  return "unknown";
}

BallMetric ball_metric_from_string(std::string_view name) {
  if (name == "hilbert") return BallMetric::Hilbert;
  return to_ball_metric(norm_from_string(name));
}

BallMetric to_ball_metric(NormId id) {
  switch (id) {
    case NormId::Sup:
      return BallMetric::Sup;
    case NormId::L1:
      return BallMetric::L1;
    case NormId::Euclid:
      return BallMetric::Euclid;
    case NormId::Variation:
      return BallMetric::Variation;
  }
  return BallMetric::Sup;
}

double BoundingBall::distance_to_center(const Vec& x) const {
  if (x.size() != center.size()) throw DomainError("BoundingBall: dimension mismatch");
  switch (metric) {
    case BallMetric::Sup:
      return sup_norm(x - center);
    case BallMetric::L1:
      return l1_norm(x - center);
    case BallMetric::Euclid:
      return (x - center).norm();
    case BallMetric::Variation:
      return variation(x - center);
    case BallMetric::Hilbert:
      return hilbert_metric(x, center);
  }
  return 0.0;
}

namespace {

Circumcenter sup_circumcenter(const std::vector<Vec>& points) {
  Vec lo = points.front(), hi = points.front();
  for (const auto& p : points) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  return {(lo + hi) / 2.0, ((hi - lo) / 2.0).maxCoeff()};
}

Circumcenter variation_circumcenter(const std::vector<Vec>& raw) {
  const Index n = raw.front().size();
  if (n < 2) throw DomainError("circumcenter: Variation needs ambient dimension >= 2");
  std::vector<Vec> points;
  points.reserve(raw.size());
  for (const auto& p : raw) points.push_back(p.array() - p(n - 1));

  // Variables (y_0..y_{n-2}, R); y_{n-1} = 0. For every ordered pair (j, k):
  // y_j - y_k - R <= min_i (w_ij - w_ik).
  LinearProgram lp;
  lp.objective = Vec::Zero(n);
  lp.objective(n - 1) = -1.0;
  lp.bounds.assign(n, VarBound::Free);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < n; ++k) {
      if (j == k) continue;
      double rhs = std::numeric_limits<double>::infinity();
      for (const auto& w : points) rhs = std::min(rhs, w(j) - w(k));
      Vec row = Vec::Zero(n);
      if (j < n - 1) row(j) += 1.0;
      if (k < n - 1) row(k) -= 1.0;
      row(n - 1) = -1.0;
      lp.inequalities.push_back({std::move(row), rhs});
    }
  }
  const LpOutcome out = solve_lp(lp);
  if (out.status != LpStatus::Optimal) throw NonterminationError("circumcenter: LP did not reach an optimum");

  Circumcenter cc;
  cc.center = Vec::Zero(n);
  cc.center.head(n - 1) = out.point.head(n - 1);
  for (const auto& w : points) cc.radius = std::max(cc.radius, variation(cc.center - w));
  return cc;
}

int ball_dimension(NormId id, int n) { return id == NormId::Variation ? n - 1 : n; }

}  // namespace

Circumcenter circumcenter(const std::vector<Vec>& points, NormId id) {
  if (points.empty()) throw DomainError("circumcenter: empty point list");
  const Index n = points.front().size();
  for (const auto& p : points) {
    if (p.size() != n) throw DomainError("circumcenter: dimension mismatch");
    require_finite(p, "circumcenter");
  }
  switch (id) {
    case NormId::Sup:
      return sup_circumcenter(points);
    case NormId::Variation:
      return variation_circumcenter(points);
    default:
      throw UnsupportedError("circumcenter: only Sup and Variation are supported");
  }
}

NormConstants norm_constants(NormId id, int n) {
  if (n < 1) throw DomainError("norm_constants: dimension must be positive");
  NormConstants k;
  switch (id) {
    case NormId::Sup:
      k.alpha = 1.0;
      k.beta = 2.0;
      break;
    case NormId::L1:
      k.alpha = 2.0 - 2.0 / n;
      k.beta = 2.0;
      break;
    case NormId::Variation:
      if (n < 2) throw DomainError("norm_constants: Variation needs ambient dimension >= 2");
      k.alpha = 1.0 - 1.0 / (n - 1);
      k.beta = 1.0;
      break;
    case NormId::Euclid:
      throw UnsupportedError("norm_constants: no tabulated constants for the Euclidean norm");
  }
  k.factor = (2.0 + k.beta - k.alpha) / (k.beta - k.alpha);
  return k;
}

BoundingBall localize_fixed_points(const std::vector<Vec>& witnesses, NormId id) {
  if (id != NormId::Sup && id != NormId::Variation)
    throw UnsupportedError("localize_fixed_points: only Sup and Variation are supported");
  if (witnesses.empty()) throw DomainError("localize_fixed_points: no witnesses");
  const auto n = static_cast<int>(witnesses.front().size());
  const int dim = ball_dimension(id, n);
  if (static_cast<int>(witnesses.size()) < dim + 1)
    throw DomainError("localize_fixed_points: fewer witnesses than needed to illuminate the unit ball");
  const Circumcenter cc = circumcenter(witnesses, id);
  if (cc.radius <= 0.0) throw DomainError("localize_fixed_points: witnesses have zero circumradius (inconsistent input)");
  return {cc.center, norm_constants(id, n).factor * cc.radius, to_ball_metric(id)};
}

BoundingBall localize_eigenvectors(const std::vector<Vec>& witnesses, int n) {
  if (n < 2) throw DomainError("localize_eigenvectors: dimension must be at least 2");
  if (static_cast<int>(witnesses.size()) < n)
    throw DomainError("localize_eigenvectors: fewer witnesses than needed to illuminate the unit ball");
  std::vector<Vec> logs;
  logs.reserve(witnesses.size());
  for (const auto& x : witnesses) {
    if (x.size() != n) throw DomainError("localize_eigenvectors: dimension mismatch");
    logs.push_back(log_coords(normalize_last(x)));
  }
  const Circumcenter cc = circumcenter(logs, NormId::Variation);
  if (cc.radius <= 0.0)
    throw DomainError("localize_eigenvectors: witnesses have zero circumradius (inconsistent input)");
  return {exp_coords(cc.center), norm_constants(NormId::Variation, n).factor * cc.radius, BallMetric::Hilbert};
}

BoundingBall localize_eigenvectors(const DetectionReport& report) {
  if (report.kind != DetectionKind::Eigenvector) throw DomainError("localize_eigenvectors: not an eigenvector report");
  if (report.status != DetectionStatus::Confirmed) throw DomainError("localize_eigenvectors: report is not Confirmed");
  std::vector<Vec> points;
  for (const auto& w : report.witnesses) points.push_back(w.point);
  return localize_eigenvectors(points, report.dim);
}

bool HalfspacePolytope::contains(const Vec& v, double slack) const {
  for (const auto& h : rows) {
    const double scale = std::max(1.0, std::abs(h.offset));
    if (v.dot(h.normal) - h.offset > slack * scale) return false;
  }
  return true;
}

PolytopeResult halfspace_polytope(const VectorMap& f, const std::vector<Vec>& probes) {
  if (probes.empty()) throw DomainError("halfspace_polytope: no probes");
  const Index n = probes.front().size();
  PolytopeResult out;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const Vec& w = probes[i];
    if (w.size() != n) throw DomainError("halfspace_polytope: dimension mismatch");
    const Vec normal = w - f(w);
    if (!normal.allFinite()) throw DomainError("halfspace_polytope: map returned a non-finite value");
    if (normal.cwiseAbs().maxCoeff() == 0.0) {
      out.warnings.push_back("probe " + std::to_string(i) + " is a fixed point; skipped");
      continue;
    }
    out.polytope.rows.push_back({normal, w.dot(normal)});
  }
  if (out.polytope.rows.empty()) return out;

  LinearProgram lp;
  lp.bounds.assign(n, VarBound::Free);
  for (const auto& h : out.polytope.rows) lp.inequalities.push_back({h.normal, h.offset});
  out.bounded = true;
  for (Index j = 0; j < n && out.bounded && !out.empty; ++j) {
    for (double sign : {1.0, -1.0}) {
      lp.objective = sign * Vec::Unit(n, j);
      const LpOutcome r = solve_lp(lp);
      if (r.status == LpStatus::Unbounded) {
        out.bounded = false;
        break;
      }
      if (r.status == LpStatus::Infeasible) {
        out.empty = true;
        break;
      }
    }
  }
  return out;
}

}  // namespace coneglow
