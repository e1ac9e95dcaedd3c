#pragma once

#include "coneglow/core.hpp"
#include "coneglow/spaces.hpp"

#include <optional>
#include <vector>

namespace coneglow {

// Slack applied to every strict inequality in the illumination predicates.
inline constexpr double kPredicateSlack = 1e-12;
// Slack applied to LP-based strict inequalities.
inline constexpr double kLpSlack = 1e-9;

struct Assignment {
  Index extreme_point;  // index into extreme_points(id, n), or a sign-pattern mask
  Index vector;         // index of the illuminating vector
};

struct IlluminationVerdict {
  bool covered = false;
  std::optional<Vec> uncovered_witness;  // first extreme point left dark
  std::vector<Assignment> assignments;   // first illuminating vector per extreme point
};

// True iff ||z + t v|| < 1 for some t > 0. z must lie on the unit sphere of `id`.
// Polyhedral norms are probed at t = 2^-k, k = 0..40, after normalizing v; the
// Euclidean case is decided by the sign of <z, v>.
bool illuminates_point(const Vec& z, const Vec& v, NormId id);

// Sup-norm criterion on residuals f(w) - w: covered iff every sign pattern
// J subset of {1..n} is realized strictly by some residual (negative on J, positive
// off J). Assignments are keyed by the pattern mask (bit j set <=> j in J).
IlluminationVerdict sup_criterion(const std::vector<Vec>& residuals);

struct HullCertificate {
  bool inside = false;
  // Optimum of: max e s.t. lambda_i >= e, sum lambda_i v_i = 0, sum lambda_i = 1.
  // -infinity when 0 is not in the affine hull.
  double epsilon = 0.0;
  Index rank = 0;
};

// Decides 0 in int conv{v_1..v_m} by the epsilon-LP plus a full-rank check.
HullCertificate interior_hull_certificate(const std::vector<Vec>& vectors);

// Sufficient test: every extreme point z of B_1 has some i with ||z - v_i|| < 1.
// Vectors are expected to be normalized residual directions (w - f(w)) / ||.||.
bool ball_cover_criterion(const std::vector<Vec>& vectors, NormId id);

// Checks every extreme point of B_1 against the residuals with illuminates_point.
IlluminationVerdict extreme_illumination(const std::vector<Vec>& residuals, NormId id);

}  // namespace coneglow
