#pragma once

#include "coneglow/core.hpp"
#include "coneglow/detector.hpp"
#include "coneglow/spaces.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace coneglow {

enum class BallMetric { Sup, L1, Euclid, Variation, Hilbert };

std::string_view to_string(BallMetric metric);
BallMetric ball_metric_from_string(std::string_view name);
BallMetric to_ball_metric(NormId id);

struct BoundingBall {
  Vec center;
  double radius = 0.0;
  BallMetric metric = BallMetric::Sup;

  double distance_to_center(const Vec& x) const;
  bool contains(const Vec& x, double slack = 0.0) const { return distance_to_center(x) <= radius + slack; }
};

struct Circumcenter {
  Vec center;
  double radius = 0.0;
};

// Smallest R0 with a common R0-ball around all points, and one such center.
// Sup uses the coordinatewise midrange; Variation solves a small LP with the last
// coordinate of the center pinned to zero.
Circumcenter circumcenter(const std::vector<Vec>& points, NormId id);

struct NormConstants {
  double alpha = 0.0;  // sup over the sphere of the distance to the nearest extreme point
  double beta = 0.0;
  double factor = 0.0;  // (2 + beta - alpha) / (beta - alpha)
};

NormConstants norm_constants(NormId id, int n);

// Ball of radius factor * R0 around the circumcenter of witnesses w_i whose
// residuals f(w_i) - w_i illuminate the unit ball.
BoundingBall localize_fixed_points(const std::vector<Vec>& witnesses, NormId id);

// Hilbert-metric ball containing every positive eigenvector, from the witnesses
// x^J of a Confirmed eigenvector report.
BoundingBall localize_eigenvectors(const std::vector<Vec>& witnesses, int n);
BoundingBall localize_eigenvectors(const DetectionReport& report);

struct Halfspace {
  Vec normal;
  double offset = 0.0;  // <v, normal> <= offset
};

struct HalfspacePolytope {
  std::vector<Halfspace> rows;

  bool contains(const Vec& v, double slack = 1e-9) const;
};

struct PolytopeResult {
  HalfspacePolytope polytope;
  bool bounded = false;
  bool empty = false;
  std::vector<std::string> warnings;
};

// Euclidean localization: Fix(f) lies in the intersection of
// H_w = {v : <v, w - f(w)> <= <w, w - f(w)>} over the probes.
PolytopeResult halfspace_polytope(const VectorMap& f, const std::vector<Vec>& probes);

}  // namespace coneglow
