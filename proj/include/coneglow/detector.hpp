#pragma once

#include "coneglow/conemaps.hpp"
#include "coneglow/core.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace coneglow {

// Nonempty proper subset J of {0, ..., n-1}, stored as a bitmask.
class SubsetMask {
 public:
  SubsetMask(std::uint32_t bits, int n);

  std::uint32_t bits() const { return bits_; }
  int dim() const { return n_; }
  bool contains(int j) const { return (bits_ >> j) & 1u; }
  std::vector<int> indices() const;

  friend bool operator==(const SubsetMask&, const SubsetMask&) = default;
  friend auto operator<=>(const SubsetMask&, const SubsetMask&) = default;

 private:
  std::uint32_t bits_;
  int n_;
};

inline constexpr int kMaxDetectionDim = 24;

struct DetectionConfig {
  double box_radius = 100.0;
  long max_samples = 100'000;
  std::uint64_t seed = 0;
  double gap_tol = 1e-9;

  void validate() const;
};

enum class DetectionKind { Eigenvector, SupFixedPoint, SmoothFixedPoint };
enum class DetectionStatus { Confirmed, Undetermined };

std::string_view to_string(DetectionKind kind);
std::string_view to_string(DetectionStatus status);

struct Witness {
  // Eigenvector runs: the subset J. Sup runs: the sign pattern {j : f(w)_j < w_j}.
  // Smooth runs: unused (0).
  std::uint32_t mask = 0;
  Vec point;
};

struct DetectionReport {
  DetectionKind kind = DetectionKind::Eigenvector;
  DetectionStatus status = DetectionStatus::Undetermined;
  int dim = 0;
  long samples_used = 0;
  std::uint64_t subsets_covered = 0;
  std::uint64_t total_subsets = 0;
  std::vector<Witness> witnesses;  // ascending by mask for eigenvector and sup runs
  DetectionConfig config;
};

// Lower cuts with a strict gap of a vector of log-ratios: after sorting, cut k
// emits the k smallest indices when rho_(k+1) - rho_(k) > tau * max(1, spread).
std::vector<SubsetMask> cut_masks(const Vec& log_ratios, double tau);

// All J satisfying max_{j in J} f(x)_j/x_j < min_{j notin J} f(x)_j/x_j with gap tau.
std::vector<SubsetMask> ratio_subsets(const MapSpec& spec, const Vec& x, double tau);

// Randomized search for witnesses x^J of every nonempty proper J. Confirmed means
// the eigenspace of `spec` in the open cone is nonempty and bounded in Hilbert's
// metric. Undetermined is never a certificate of emptiness.
DetectionReport detect_eigenvector(const MapSpec& spec, const DetectionConfig& config);

using VectorMap = std::function<Vec(const Vec&)>;

// Runs `trials` independent eigenvector detections; trial i uses seed
// config.seed + i, so the result does not depend on `threads` (0 = hardware).
std::vector<DetectionReport> detect_eigenvector_trials(const MapSpec& spec, const DetectionConfig& config, int trials,
                                                       unsigned threads = 0);

// f must be nonexpansive for the sup norm. Confirmed once every strict sign
// pattern of f(w) - w has been seen.
DetectionReport detect_fixed_point_sup(const VectorMap& f, int n, const DetectionConfig& config);

// f must be nonexpansive for the Euclidean norm. Confirmed once 0 lies in the
// interior of the convex hull of sampled residual directions.
DetectionReport detect_fixed_point_smooth(const VectorMap& f, int n, const DetectionConfig& config);

// f(x) = <phi, x> z - c z: Euclidean-nonexpansive with f(w_i) = 0 at the base
// points and no fixed point.
struct AdversarialMapSpec {
  Vec phi;
  Vec z;
  double c = 0.0;
  std::vector<Vec> base_points;

  Vec operator()(const Vec& x) const { return (phi.dot(x) - c) * z; }
};

// Base points w_i = -v_i; requires m < n + 1 and c > 0.
AdversarialMapSpec build_adversarial_euclid(const std::vector<Vec>& residuals, double c);

}  // namespace coneglow
