#include "coneglow/detector.hpp"

#include "coneglow/illumination.hpp"
#include "coneglow/rng.hpp"
#include "coneglow/spaces.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <numeric>
#include <mutex>
#include <string>
#include <thread>

namespace coneglow {

SubsetMask::SubsetMask(std::uint32_t bits, int n) : bits_(bits), n_(n) {
  if (n < 1 || n > kMaxDetectionDim) throw DomainError("SubsetMask: dimension out of range");
  const std::uint32_t full = (1u << n) - 1u;
  if (bits == 0 || bits == full || (bits & ~full) != 0)
    throw DomainError("SubsetMask: must encode a nonempty proper subset");
}

std::vector<int> SubsetMask::indices() const {
  std::vector<int> out;
  for (int j = 0; j < n_; ++j)
    if (contains(j)) out.push_back(j);
  return out;
}

void DetectionConfig::validate() const {
  if (!(box_radius > 0) || !std::isfinite(box_radius)) throw DomainError("config: box radius must be positive");
  if (max_samples < 1) throw DomainError("config: max_samples must be at least 1");
  if (!(gap_tol >= 0) || !std::isfinite(gap_tol)) throw DomainError("config: gap tolerance must be finite and >= 0");
}

std::string_view to_string(DetectionKind kind) {
  switch (kind) {
    case DetectionKind::Eigenvector:
      return "eigenvector";
    case DetectionKind::SupFixedPoint:
      return "sup_fixed_point";
    case DetectionKind::SmoothFixedPoint:
      return "smooth_fixed_point";
  }
  return "unknown";
}

std::string_view to_string(DetectionStatus status) {
  return status == DetectionStatus::Confirmed ? "Confirmed" : "Undetermined";
}

std::vector<SubsetMask> cut_masks(const Vec& log_ratios, double tau) {
  const auto n = static_cast<int>(log_ratios.size());
  if (n < 1 || n > kMaxDetectionDim) throw DomainError("cut_masks: dimension out of range");
  require_finite(log_ratios, "cut_masks");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return log_ratios(i) < log_ratios(j); });
  const double spread = log_ratios(order.back()) - log_ratios(order.front());
  const double threshold = tau * std::max(1.0, spread);

  std::vector<SubsetMask> out;
  std::uint32_t bits = 0;
  for (int k = 1; k < n; ++k) {
    bits |= 1u << order[k - 1];
    if (log_ratios(order[k]) - log_ratios(order[k - 1]) > threshold) out.emplace_back(bits, n);
  }
  return out;
}

std::vector<SubsetMask> ratio_subsets(const MapSpec& spec, const Vec& x, double tau) {
  const Vec fx = spec.eval(x);
  const Vec rho = (fx.array().log() - x.array().log()).matrix();
  return cut_masks(rho, tau);
}

namespace {

void check_dim(int n) {
  if (n < 1) throw DomainError("detector: dimension must be positive");
  if (n > kMaxDetectionDim)
    throw BudgetError("detector: dimension " + std::to_string(n) + " exceeds guard " + std::to_string(kMaxDetectionDim));
}

Vec sample_box(Rng& rng, int n, double radius) {
  Vec w(n);
  for (int j = 0; j < n; ++j) w(j) = rng.uniform(-radius, radius);
  return w;
}

void collect_witnesses(DetectionReport& report, const std::vector<Vec>& table) {
  for (std::size_t mask = 0; mask < table.size(); ++mask)
    if (table[mask].size() > 0) report.witnesses.push_back({static_cast<std::uint32_t>(mask), table[mask]});
}

// True when the mean direction has a positive product with every entry, so 0 is
// not even in the closed hull and the LP can be skipped.
template <typename Pool>
bool separated_by_mean(const Pool& pool) {
  Vec u = Vec::Zero(pool.front().dir.size());
  for (const auto& e : pool) u += e.dir;
  for (const auto& e : pool)
    if (u.dot(e.dir) <= 0) return false;
  return true;
}

}  // namespace

DetectionReport detect_eigenvector(const MapSpec& spec, const DetectionConfig& config) {
  config.validate();
  const int n = spec.dim();
  check_dim(n);

  DetectionReport report;
  report.kind = DetectionKind::Eigenvector;
  report.dim = n;
  report.config = config;
  report.total_subsets = (std::uint64_t{1} << n) - 2;

  std::vector<Vec> table(std::size_t{1} << n);
  Rng rng(config.seed);
  while (report.subsets_covered < report.total_subsets && report.samples_used < config.max_samples) {
    Vec y = sample_box(rng, n, config.box_radius);
    y(n - 1) = 0.0;
    const Vec x = exp_coords(y);
    ++report.samples_used;
    for (const SubsetMask& mask : ratio_subsets(spec, x, config.gap_tol)) {
      if (table[mask.bits()].size() == 0) {
        table[mask.bits()] = x;
        ++report.subsets_covered;
      }
    }
  }
  report.status =
      report.subsets_covered == report.total_subsets ? DetectionStatus::Confirmed : DetectionStatus::Undetermined;
  collect_witnesses(report, table);
  return report;
}

std::vector<DetectionReport> detect_eigenvector_trials(const MapSpec& spec, const DetectionConfig& config, int trials,
                                                       unsigned threads) {
  if (trials < 1) throw DomainError("detect_eigenvector_trials: trials must be positive");
  config.validate();
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(trials));

  std::vector<DetectionReport> out(static_cast<std::size_t>(trials));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < trials; i = next++) {
      try {
        DetectionConfig c = config;
        c.seed = config.seed + static_cast<std::uint64_t>(i);
        out[static_cast<std::size_t>(i)] = detect_eigenvector(spec, c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

DetectionReport detect_fixed_point_sup(const VectorMap& f, int n, const DetectionConfig& config) {
  config.validate();
  check_dim(n);

  DetectionReport report;
  report.kind = DetectionKind::SupFixedPoint;
  report.dim = n;
  report.config = config;
  report.total_subsets = std::uint64_t{1} << n;

  std::vector<Vec> table(report.total_subsets);
  Rng rng(config.seed);
  while (report.subsets_covered < report.total_subsets && report.samples_used < config.max_samples) {
    const Vec w = sample_box(rng, n, config.box_radius);
    ++report.samples_used;
    const Vec r = f(w) - w;
    if (r.size() != n || !r.allFinite()) throw DomainError("detect_fixed_point_sup: map returned an invalid vector");
    const double slack = config.gap_tol * std::max(1.0, sup_norm(r));
    std::uint32_t mask = 0;
    bool strict = true;
    for (int j = 0; j < n && strict; ++j) {
      if (std::abs(r(j)) <= slack) strict = false;
      if (r(j) < 0) mask |= 1u << j;
    }
    if (strict && table[mask].size() == 0) {
      table[mask] = w;
      ++report.subsets_covered;
    }
  }
  report.status =
      report.subsets_covered == report.total_subsets ? DetectionStatus::Confirmed : DetectionStatus::Undetermined;
  collect_witnesses(report, table);
  return report;
}

DetectionReport detect_fixed_point_smooth(const VectorMap& f, int n, const DetectionConfig& config) {
  config.validate();
  check_dim(n);

  DetectionReport report;
  report.kind = DetectionKind::SmoothFixedPoint;
  report.dim = n;
  report.config = config;
  report.total_subsets = 1;

  // Sliding window of residual directions; any subset that certifies is a valid
  // certificate for the full sample set.
  const std::size_t batch = static_cast<std::size_t>(n) + 1;
  const std::size_t window = std::max<std::size_t>(32, 8 * batch);
  struct Entry {
    Vec w;
    Vec dir;
  };
  std::deque<Entry> pool;
  std::size_t fresh = 0;

  Rng rng(config.seed);
  while (report.samples_used < config.max_samples) {
    Vec w = sample_box(rng, n, config.box_radius);
    ++report.samples_used;
    const Vec r = f(w) - w;
    if (r.size() != n || !r.allFinite()) throw DomainError("detect_fixed_point_smooth: map returned an invalid vector");
    const double len = r.norm();
    if (len > 0) {
      pool.push_back({std::move(w), r / len});
      if (pool.size() > window) pool.pop_front();
      ++fresh;
    }
    if (fresh < batch || pool.size() < batch) continue;
    fresh = 0;
    if (separated_by_mean(pool)) continue;
    std::vector<Vec> dirs;
    dirs.reserve(pool.size());
    for (const auto& e : pool) dirs.push_back(e.dir);
    if (interior_hull_certificate(dirs).inside) {
      report.status = DetectionStatus::Confirmed;
      report.subsets_covered = 1;
      for (const auto& e : pool) report.witnesses.push_back({0u, e.w});
      break;
    }
  }
  return report;
}

AdversarialMapSpec build_adversarial_euclid(const std::vector<Vec>& residuals, double c) {
  if (residuals.empty()) throw DomainError("build_adversarial_euclid: no residuals");
  if (!(c > 0) || !std::isfinite(c)) throw DomainError("build_adversarial_euclid: c must be positive");
  const Index n = residuals.front().size();
  const auto m = static_cast<Index>(residuals.size());
  if (m >= n + 1) throw ConstructionError("build_adversarial_euclid: needs fewer than n + 1 residuals");

  AdversarialMapSpec out;
  out.c = c;
  Mat w(m, n);
  for (Index i = 0; i < m; ++i) {
    if (residuals[i].size() != n) throw DomainError("build_adversarial_euclid: length mismatch");
    require_finite(residuals[i], "build_adversarial_euclid");
    w.row(i) = -residuals[i].transpose();
    out.base_points.push_back(-residuals[i]);
  }
  const Vec target = Vec::Constant(m, c);
  out.phi = w.completeOrthogonalDecomposition().solve(target);
  if ((w * out.phi - target).norm() > 1e-9 * (1.0 + c) || out.phi.norm() == 0.0)
    throw ConstructionError("build_adversarial_euclid: base points are degenerate; perturb the residuals");
  out.z = out.phi / out.phi.squaredNorm();
  return out;
}

}  // namespace coneglow
