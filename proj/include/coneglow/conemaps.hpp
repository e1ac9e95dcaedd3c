#pragma once

#include "coneglow/core.hpp"

#include <functional>
#include <memory>
#include <string_view>
#include <variant>
#include <vector>

namespace coneglow {

// A positive map f on the open cone R^n_{>0}, as a plain callable.
using ConeFunction = std::function<Vec(const Vec&)>;

// c * M_{r,sigma}(x): weighted power mean with exponent r in [-inf, inf].
struct MeanTerm {
  double r = 1.0;
  Vec sigma;  // nonnegative, sums to 1
  double coeff = 1.0;
};

namespace detail {
struct MapNode;
}

// Immutable, cheaply copyable description of an order-preserving homogeneous
// map. Built only through the checked factories below.
class MapSpec {
 public:
  enum class Kind { MeanSum, Schoen, Triangle, Matrix, Compose, Sum, Scale };

  // f_i(x) = sum over rows[i] of coeff * M_{r,sigma}(x).
  static MapSpec mean_sum(std::vector<std::vector<MeanTerm>> rows);
  // Schoen's four-dimensional map with per-row coefficients a, b, c, d.
  static MapSpec schoen(Vec a, Vec b, Vec c, Vec d);
  // Same, from a 4x4 table whose rows are (a_i, b_i, c_i, d_i).
  static MapSpec schoen(const Mat& table);
  static MapSpec triangle(double c);
  static MapSpec matrix(Mat a);
  // chain[0] o chain[1] o ... o chain[k-1]; the last entry is applied first.
  static MapSpec compose(std::vector<MapSpec> chain);
  static MapSpec sum(std::vector<MapSpec> terms);
  static MapSpec scale(double alpha, MapSpec child);

  Kind kind() const;
  int dim() const;

  Vec operator()(const Vec& x) const { return eval(x); }
  Vec eval(const Vec& x) const;

  const detail::MapNode& node() const { return *node_; }

 private:
  explicit MapSpec(std::shared_ptr<const detail::MapNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::MapNode> node_;
};

std::string_view to_string(MapSpec::Kind kind);

struct MeanSumMap {
  std::vector<std::vector<MeanTerm>> rows;
};
struct SchoenMap {
  Vec a, b, c, d;
};
struct TriangleMap {
  double c = 0.0;
};
struct MatrixMap {
  Mat a;
};
struct ComposeMap {
  std::vector<MapSpec> chain;
};
struct SumMap {
  std::vector<MapSpec> terms;
};
struct ScaleMap {
  double alpha = 1.0;
  MapSpec child;
};

namespace detail {
struct MapNode {
  std::variant<MeanSumMap, SchoenMap, TriangleMap, MatrixMap, ComposeMap, SumMap, ScaleMap> payload;
  int dim = 0;
};
}  // namespace detail

// Weighted power mean; r = 0 is the weighted geometric mean and r = +-inf the
// max/min over supp(sigma). Evaluated with the extreme entry factored out.
double power_mean(const Vec& x, const Vec& sigma, double r);

// Harmonic pairing (1/s + 1/t)^{-1} used by Schoen's map.
double harmonic_pair(double s, double t);

Vec eval(const MapSpec& spec, const Vec& x);

// g_f(x) = f(x) / f(x)_n on the slice x_n = 1.
Vec normalized_map(const MapSpec& spec, const Vec& x);

// h = Log o g_f o Exp on V0 = {y : y_n = 0}.
Vec conjugate_map(const MapSpec& spec, const Vec& y);

struct EigenResult {
  Vec vector;             // normalized so the last entry is 1
  double eigenvalue = 0;  // f(vector)_n
  long iterations = 0;
  bool converged = false;
  double final_step = 0;  // Hilbert distance between the last two iterates
  // Collatz-Wielandt bounds min_i f(x)_i/x_i <= eigenvalue <= max_i f(x)_i/x_i.
  double ratio_min = 0;
  double ratio_max = 0;
};

// Iterates x <- g_f(x) until d_H(x_{k+1}, x_k) < tol or max_iter steps.
EigenResult power_iteration(const MapSpec& spec, const Vec& x0, double tol = 1e-12, long max_iter = 100'000);

struct LinearOracleResult {
  bool exists = false;
  bool unique = false;
  double spectral_radius = 0;
  std::vector<std::vector<int>> classes;
  std::vector<double> class_radius;
  std::vector<bool> basic;
  std::vector<bool> final;
};

// Positive-eigenvector test for a nonnegative matrix: a positive eigenvector
// exists iff the final classes are exactly the basic classes, and it is unique
// up to scaling iff there is a single basic final class.
LinearOracleResult linear_oracle(const Mat& a);

// Spectral radius of an irreducible nonnegative matrix by shifted power iteration.
double irreducible_spectral_radius(const Mat& b, double tol = 1e-10, long max_iter = 100'000);

// Random check that f is order-preserving and homogeneous of degree one.
bool is_order_preserving_homogeneous_probe(const ConeFunction& f, int n, int trials, std::uint64_t seed);
bool is_order_preserving_homogeneous_probe(const MapSpec& spec, int trials, std::uint64_t seed);

}  // namespace coneglow
