#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "coneglow/detector.hpp"
#include "coneglow/fixtures.hpp"
#include "coneglow/json_io.hpp"
#include "coneglow/rng.hpp"
#include "coneglow/spaces.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <future>

using namespace coneglow;

namespace {

Vec v(std::initializer_list<double> xs) {
  Vec out(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) out(i++) = x;
  return out;
}

std::vector<std::uint32_t> bits(const std::vector<SubsetMask>& masks) {
  std::vector<std::uint32_t> out;
  for (const auto& m : masks) out.push_back(m.bits());
  std::sort(out.begin(), out.end());
  return out;
}

DetectionConfig config(std::uint64_t seed, long max_samples = 100'000, double radius = 100.0) {
  DetectionConfig c;
  c.seed = seed;
  c.max_samples = max_samples;
  c.box_radius = radius;
  return c;
}

// Gap between the J and J^c log-ratios at x, relative to max(1, spread).
double relative_gap(const MapSpec& spec, const Vec& x, std::uint32_t mask) {
  const Vec fx = spec(x);
  double in_max = -1e300, out_min = 1e300, lo = 1e300, hi = -1e300;
  for (Index j = 0; j < x.size(); ++j) {
    const double rho = std::log(fx(j)) - std::log(x(j));
    lo = std::min(lo, rho);
    hi = std::max(hi, rho);
    if ((mask >> j) & 1u)
      in_max = std::max(in_max, rho);
    else
      out_min = std::min(out_min, rho);
  }
  return (out_min - in_max) / std::max(1.0, hi - lo);
}

}  // namespace

TEST_CASE("subset masks") {
  const SubsetMask m(0b101, 3);
  CHECK(m.contains(0));
  CHECK_FALSE(m.contains(1));
  CHECK(m.indices() == std::vector<int>{0, 2});
  CHECK_THROWS_AS(SubsetMask(0, 3), DomainError);
  CHECK_THROWS_AS(SubsetMask(0b111, 3), DomainError);
  CHECK_THROWS_AS(SubsetMask(1, 25), DomainError);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(DetectionConfig{}.validate());
  auto c = DetectionConfig{};
  c.box_radius = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = DetectionConfig{};
  c.max_samples = 0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = DetectionConfig{};
  c.gap_tol = -1;
  CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("ratio subset examples") {
  Mat ones(2, 2);
  ones << 1, 1, 1, 1;
  CHECK(bits(ratio_subsets(MapSpec::matrix(ones), v({2, 1}), 1e-9)) == std::vector<std::uint32_t>{0b01});
  CHECK(ratio_subsets(MapSpec::matrix(ones), v({1, 1}), 1e-9).empty());
  CHECK(bits(cut_masks(v({1, 2, 3}), 1e-9)) == std::vector<std::uint32_t>{0b001, 0b011});
  CHECK(bits(cut_masks(v({3, 1, 2}), 1e-9)) == std::vector<std::uint32_t>{0b010, 0b110});
  CHECK(bits(cut_masks(v({1, 1, 3}), 1e-9)) == std::vector<std::uint32_t>{0b011});
}

TEST_CASE("ratio subsets equal the exhaustive check") {
  Rng rng(51);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(9));
    const auto spec = testing::random_cone_spec(rng, n, 1);
    const Vec x = testing::random_slice_point(rng, n, 3.0);
    const auto masks = ratio_subsets(spec, x, 1e-9);
    CHECK(masks.size() <= std::size_t(n - 1));
    CHECK(bits(masks) == testing::exhaustive_ratio_subsets(spec(x), x, 1e-9));
  }
  // Ties and a large tolerance.
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    Vec rho(n);
    for (int j = 0; j < n; ++j) rho(j) = static_cast<double>(rng.below(3));
    const Vec x = Vec::Ones(n);
    const Vec fx = rho.array().exp().matrix();
    for (double tau : {0.0, 1e-9, 0.6}) CHECK(bits(cut_masks(rho, tau)) == testing::exhaustive_ratio_subsets(fx, x, tau));
  }
}

TEST_CASE("eigenvector detection examples") {
  Mat ones(2, 2);
  ones << 1, 1, 1, 1;
  const auto r = detect_eigenvector(MapSpec::matrix(ones), config(1));
  CHECK(r.status == DetectionStatus::Confirmed);
  CHECK(r.samples_used <= 10);
  CHECK(r.total_subsets == 2);
  CHECK(r.subsets_covered == 2);

  const auto tri = detect_eigenvector(MapSpec::triangle(0.0), config(2, 20'000));
  CHECK(tri.status == DetectionStatus::Undetermined);
  CHECK(tri.samples_used == 20'000);
  CHECK(tri.subsets_covered < tri.total_subsets);

  for (double c : {1.0 / 6.0, 0.25, 1.0 / 3.0})
    CHECK(detect_eigenvector(MapSpec::triangle(c), config(3)).status == DetectionStatus::Confirmed);

  const auto fg = detect_eigenvector(fixtures::schoen_composite(), config(0));
  CHECK(fg.status == DetectionStatus::Confirmed);
  CHECK(fg.samples_used >= 5);
  CHECK(fg.total_subsets == 14);
}

TEST_CASE("confirmed eigenvector reports are sound") {
  Rng rng(52);
  for (const auto& [name, spec] : testing::builtin_specs()) {
    CAPTURE(name);
    const auto report = detect_eigenvector(spec, config(5, 20'000, 20.0));
    if (report.status != DetectionStatus::Confirmed) continue;
    CHECK(report.subsets_covered == report.total_subsets);
    CHECK(report.witnesses.size() == report.total_subsets);
    for (std::size_t i = 1; i < report.witnesses.size(); ++i) CHECK(report.witnesses[i - 1].mask < report.witnesses[i].mask);
    for (const auto& w : report.witnesses) CHECK(relative_gap(spec, w.point, w.mask) > report.config.gap_tol / 2);

    for (int k = 0; k < 5; ++k) {
      const auto eig = power_iteration(spec, testing::random_slice_point(rng, spec.dim(), 3.0));
      // Maps with a segment of eigenvectors converge along it; the residual check still applies.
      REQUIRE(eig.converged);
      const Vec fv = spec(eig.vector);
      CHECK(sup_norm(Vec(fv - eig.eigenvalue * eig.vector)) / sup_norm(eig.vector) <= 1e-8);
    }
  }
}

TEST_CASE("detection is deterministic") {
  const auto spec = fixtures::schoen_composite();
  const auto a = to_json(detect_eigenvector(spec, config(9))).dump();
  const auto b = to_json(detect_eigenvector(spec, config(9))).dump();
  CHECK(a == b);
  const auto c = to_json(detect_eigenvector(spec, config(10))).dump();
  CHECK(a != c);
}

TEST_CASE("sup fixed point detection") {
  const VectorMap zero = [](const Vec& x) { return Vec::Zero(x.size()).eval(); };
  const auto z = detect_fixed_point_sup(zero, 3, config(1));
  CHECK(z.status == DetectionStatus::Confirmed);
  CHECK(z.total_subsets == 8);
  for (const auto& w : z.witnesses) {
    const Vec r = zero(w.point) - w.point;
    for (int j = 0; j < 3; ++j) CHECK(((w.mask >> j) & 1u) == (r(j) < 0 ? 1u : 0u));
  }

  const VectorMap shift = [](const Vec& x) { return (x.array() + 1.0).matrix().eval(); };
  CHECK(detect_fixed_point_sup(shift, 3, config(1, 5'000)).status == DetectionStatus::Undetermined);

  const Vec b = v({1, -2, 0.5});
  const VectorMap contraction = [&](const Vec& x) { return (0.5 * x + b).eval(); };
  const auto c = detect_fixed_point_sup(contraction, 3, config(4));
  CHECK(c.status == DetectionStatus::Confirmed);
  CHECK((contraction(2 * b) - 2 * b).norm() == 0.0);
}

TEST_CASE("smooth fixed point detection") {
  const VectorMap shrink = [](const Vec& x) { return (0.9 * x).eval(); };
  CHECK(detect_fixed_point_smooth(shrink, 3, config(1)).status == DetectionStatus::Confirmed);
  const VectorMap rotate = [](const Vec& x) { return v({-x(1), x(0)}); };
  const auto r = detect_fixed_point_smooth(rotate, 2, config(2));
  CHECK(r.status == DetectionStatus::Confirmed);
  CHECK(r.total_subsets == 1);
  CHECK(r.subsets_covered == 1);
  const VectorMap shift = [](const Vec& x) { return (x.array() + 1.0).matrix().eval(); };
  CHECK(detect_fixed_point_smooth(shift, 2, config(3, 3'000)).status == DetectionStatus::Undetermined);
}

TEST_CASE("adversarial construction") {
  const auto f = build_adversarial_euclid({v({1, 0})}, 1.0);
  CHECK(f.phi.isApprox(v({-1, 0})));
  CHECK(f.z.isApprox(v({-1, 0})));
  CHECK(f(v({-1, 0})).norm() <= 1e-15);

  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(4));
    const int m = 1 + static_cast<int>(rng.below(n));
    std::vector<Vec> vs;
    for (int i = 0; i < m; ++i) {
      Vec r(n);
      for (int j = 0; j < n; ++j) r(j) = rng.normal();
      vs.push_back(r);
    }
    const double c = rng.uniform(0.1, 3.0);
    const auto g = build_adversarial_euclid(vs, c);
    CHECK(g.phi.dot(g.z) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.phi.norm() * g.z.norm() == doctest::Approx(1.0).epsilon(1e-9));
    for (int i = 0; i < m; ++i) {
      CHECK(std::abs(g.phi.dot(g.base_points[i]) - c) <= 1e-9);
      CHECK((g(g.base_points[i]) - g.base_points[i] - vs[i]).norm() <= 1e-9 * (1 + vs[i].norm()));
    }
    for (int k = 0; k < 50; ++k) {
      Vec x(n), y(n);
      for (int j = 0; j < n; ++j) {
        x(j) = rng.uniform(-10, 10);
        y(j) = rng.uniform(-10, 10);
      }
      CHECK((g(x) - g(y)).norm() <= (x - y).norm() + 1e-12);
    }
    Vec it = Vec::Zero(n);
    for (int k = 1; k <= 10; ++k) {
      it = g(it);
      CHECK((it + k * c * g.z).norm() <= 1e-9 * k);
    }
  }

  CHECK_THROWS_AS(build_adversarial_euclid({v({1, 0}), v({0, 1}), v({-1, -1})}, 1.0), ConstructionError);
  CHECK_THROWS_AS(build_adversarial_euclid({v({1, 0})}, 0.0), DomainError);
  CHECK_THROWS_AS(build_adversarial_euclid({v({1, 0}), v({-1, 0})}, 1.0), ConstructionError);
}

TEST_CASE("negative controls never confirm") {
  const VectorMap shift = [](const Vec& x) { return (x.array() + 0.25).matrix().eval(); };
  std::vector<std::future<int>> runs;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    runs.push_back(std::async(std::launch::async, [seed, &shift] {
      Rng rng(1000 + seed);
      const auto adv = build_adversarial_euclid({v({rng.normal(), rng.normal()})}, 1.0);
      const VectorMap f = [&](const Vec& x) { return adv(x); };
      int confirmed = 0;
      for (const auto* g : {&f, &shift}) {
        confirmed += detect_fixed_point_smooth(*g, 2, config(seed)).status == DetectionStatus::Confirmed;
        confirmed += detect_fixed_point_sup(*g, 2, config(seed)).status == DetectionStatus::Confirmed;
      }
      return confirmed;
    }));
  }
  for (auto& r : runs) CHECK(r.get() == 0);
}

TEST_CASE("dimension guards") {
  const VectorMap zero = [](const Vec& x) { return Vec::Zero(x.size()).eval(); };
  CHECK_THROWS_AS(detect_fixed_point_sup(zero, 25, config(0)), BudgetError);
  CHECK_THROWS_AS(detect_fixed_point_sup(zero, 0, config(0)), DomainError);
}
