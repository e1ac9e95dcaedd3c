#include "coneglow/conemaps.hpp"

#include "coneglow/rng.hpp"
#include "coneglow/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace coneglow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_mean_term(const MeanTerm& t, Index n) {
  if (std::isnan(t.r)) throw DomainError("mean term: exponent is NaN");
  if (!(t.coeff > 0) || !std::isfinite(t.coeff)) throw DomainError("mean term: coefficient must be positive and finite");
  if (t.sigma.size() != n) throw DomainError("mean term: sigma length does not match dimension");
  require_finite(t.sigma, "mean term sigma");
  if ((t.sigma.array() < 0).any()) throw DomainError("mean term: sigma has a negative weight");
  if (std::abs(t.sigma.sum() - 1.0) > 1e-12) throw DomainError("mean term: sigma must sum to 1");
}

void check_schoen_row(double a, double b, double c, double d, int row) {
  const std::string where = "schoen row " + std::to_string(row + 1);
  for (double v : {a, b, c, d})
    if (!std::isfinite(v)) throw DomainError(where + ": non-finite coefficient");
  if (!(a > 0)) throw DomainError(where + ": a must be strictly positive");
  if (b < 0 || c < 0 || d < 0) throw DomainError(where + ": b, c, d must be nonnegative");
  if (!(b > 0 || c > 0 || d > 0)) throw DomainError(where + ": at least one of b, c, d must be positive");
}

Vec checked_output(Vec y, const char* what) {
  if (!y.allFinite())
    throw OverflowError(std::string(what) + ": result overflowed; reduce the sampling box radius");
  if ((y.array() <= 0).any())
    throw OverflowError(std::string(what) + ": result underflowed to zero; reduce the sampling box radius");
  return y;
}

struct Evaluator {
  const Vec& x;

  Vec operator()(const MeanSumMap& m) const {
    Vec y(x.size());
    for (Index i = 0; i < x.size(); ++i) {
      double acc = 0.0;
      for (const auto& term : m.rows[i]) acc += term.coeff * power_mean(x, term.sigma, term.r);
      y(i) = acc;
    }
    return y;
  }

  Vec operator()(const SchoenMap& s) const {
    const double t12 = harmonic_pair(x(0), x(1));
    const double t14 = harmonic_pair(x(0), x(3));
    const double t23 = harmonic_pair(x(1), x(2));
    const double t34 = harmonic_pair(x(2), x(3));
    Vec y(4);
    for (Index i = 0; i < 4; ++i) {
      const double pair = i < 2 ? t12 : t34;
      y(i) = s.a(i) * x(i) + s.b(i) * pair + s.c(i) * t14 + s.d(i) * t23;
    }
    return y;
  }

  Vec operator()(const TriangleMap& t) const {
    Index top = 0;
    x.maxCoeff(&top);
    double mu = t.c * x.sum();
    for (Index j = 0; j < 3; ++j)
      if (j != top) mu = std::max(mu, x(j));
    Vec y = Vec::Constant(3, mu);
    y(top) = x(top);
    return y;
  }

  Vec operator()(const MatrixMap& m) const { return m.a * x; }

  Vec operator()(const ComposeMap& c) const {
    Vec y = x;
    for (auto it = c.chain.rbegin(); it != c.chain.rend(); ++it) y = it->eval(y);
    return y;
  }

  Vec operator()(const SumMap& s) const {
    Vec y = Vec::Zero(x.size());
    for (const auto& term : s.terms) y += term.eval(x);
    return y;
  }

  Vec operator()(const ScaleMap& s) const { return s.alpha * s.child.eval(x); }
};

MapSpec::Kind kind_of(const detail::MapNode& node) {
  return static_cast<MapSpec::Kind>(node.payload.index());
}

}  // namespace

std::string_view to_string(MapSpec::Kind kind) {
  switch (kind) {
    case MapSpec::Kind::MeanSum:
      return "meansum";
    case MapSpec::Kind::Schoen:
      return "schoen";
    case MapSpec::Kind::Triangle:
      return "triangle";
    case MapSpec::Kind::Matrix:
      return "matrix";
    case MapSpec::Kind::Compose:
      return "compose";
    case MapSpec::Kind::Sum:
      return "sum";
    case MapSpec::Kind::Scale:
      return "scale";
  }
  return "unknown";
}

double power_mean(const Vec& x, const Vec& sigma, double r) {
  double lo = kInf, hi = -kInf;
  for (Index i = 0; i < x.size(); ++i) {
    if (sigma(i) <= 0) continue;
    lo = std::min(lo, x(i));
    hi = std::max(hi, x(i));
  }
  if (r == kInf) return hi;
  if (r == -kInf) return lo;
  if (r == 0.0) {
    double acc = 0.0;
    for (Index i = 0; i < x.size(); ++i)
      if (sigma(i) > 0) acc += sigma(i) * std::log(x(i));
    return std::exp(acc);
  }
  const double ref = r > 0 ? hi : lo;
  double acc = 0.0;
  for (Index i = 0; i < x.size(); ++i)
    if (sigma(i) > 0) acc += sigma(i) * std::pow(x(i) / ref, r);
  return ref * std::pow(acc, 1.0 / r);
}

double harmonic_pair(double s, double t) {
  const double lo = std::min(s, t);
  const double hi = std::max(s, t);
  return lo / (1.0 + lo / hi);
}

MapSpec MapSpec::mean_sum(std::vector<std::vector<MeanTerm>> rows) {
  const auto n = static_cast<Index>(rows.size());
  if (n == 0) throw DomainError("meansum: no coordinate rows");
  for (const auto& row : rows) {
    if (row.empty()) throw DomainError("meansum: every coordinate needs at least one mean term");
    for (const auto& term : row) check_mean_term(term, n);
  }
  return MapSpec(std::make_shared<detail::MapNode>(detail::MapNode{MeanSumMap{std::move(rows)}, static_cast<int>(n)}));
}

MapSpec MapSpec::schoen(Vec a, Vec b, Vec c, Vec d) {
  for (const Vec* v : {&a, &b, &c, &d})
    if (v->size() != 4) throw DomainError("schoen: coefficient rows must have length 4");
  for (int i = 0; i < 4; ++i) check_schoen_row(a(i), b(i), c(i), d(i), i);
  return MapSpec(std::make_shared<detail::MapNode>(
      detail::MapNode{SchoenMap{std::move(a), std::move(b), std::move(c), std::move(d)}, 4}));
}

MapSpec MapSpec::schoen(const Mat& table) {
  if (table.rows() != 4 || table.cols() != 4) throw DomainError("schoen: coefficient table must be 4x4");
  return schoen(table.col(0), table.col(1), table.col(2), table.col(3));
}

MapSpec MapSpec::triangle(double c) {
  if (!(c >= 0.0 && c <= 1.0 / 3.0)) throw DomainError("triangle: c must lie in [0, 1/3]");
  return MapSpec(std::make_shared<detail::MapNode>(detail::MapNode{TriangleMap{c}, 3}));
}

MapSpec MapSpec::matrix(Mat a) {
  if (a.rows() == 0 || a.rows() != a.cols()) throw DomainError("matrix: must be square and nonempty");
  require_finite(a.reshaped(), "matrix");
  if ((a.array() < 0).any()) throw DomainError("matrix: entries must be nonnegative");
  for (Index i = 0; i < a.rows(); ++i)
    if (a.row(i).maxCoeff() <= 0) throw DomainError("matrix: row " + std::to_string(i + 1) + " is zero");
  const int n = static_cast<int>(a.rows());
  return MapSpec(std::make_shared<detail::MapNode>(detail::MapNode{MatrixMap{std::move(a)}, n}));
}

MapSpec MapSpec::compose(std::vector<MapSpec> chain) {
  if (chain.empty()) throw DomainError("compose: empty chain");
  const int n = chain.front().dim();
  for (const auto& m : chain)
    if (m.dim() != n) throw DomainError("compose: dimension mismatch");
  return MapSpec(std::make_shared<detail::MapNode>(detail::MapNode{ComposeMap{std::move(chain)}, n}));
}

MapSpec MapSpec::sum(std::vector<MapSpec> terms) {
  if (terms.empty()) throw DomainError("sum: no terms");
  const int n = terms.front().dim();
  for (const auto& m : terms)
    if (m.dim() != n) throw DomainError("sum: dimension mismatch");
  return MapSpec(std::make_shared<detail::MapNode>(detail::MapNode{SumMap{std::move(terms)}, n}));
}

MapSpec MapSpec::scale(double alpha, MapSpec child) {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw DomainError("scale: alpha must be positive and finite");
  const int n = child.dim();
  return MapSpec(std::make_shared<detail::MapNode>(detail::MapNode{ScaleMap{alpha, std::move(child)}, n}));
}

MapSpec::Kind MapSpec::kind() const { return kind_of(*node_); }

int MapSpec::dim() const { return node_->dim; }

Vec MapSpec::eval(const Vec& x) const {
  if (x.size() != dim()) throw DomainError("eval: dimension mismatch");
  require_positive(x, "eval");
  return checked_output(std::visit(Evaluator{x}, node_->payload), "eval");
}

Vec eval(const MapSpec& spec, const Vec& x) { return spec.eval(x); }

Vec normalized_map(const MapSpec& spec, const Vec& x) {
  if (x.size() == 0 || std::abs(x(x.size() - 1) - 1.0) > 1e-12)
    throw DomainError("normalized_map: last entry must equal 1");
  return normalize_last(spec.eval(x));
}

Vec conjugate_map(const MapSpec& spec, const Vec& y) { return log_coords(normalized_map(spec, exp_coords(y))); }

EigenResult power_iteration(const MapSpec& spec, const Vec& x0, double tol, long max_iter) {
  if (!(tol > 0)) throw DomainError("power_iteration: tolerance must be positive");
  if (max_iter < 1) throw DomainError("power_iteration: max_iter must be at least 1");
  EigenResult result;
  Vec x = normalize_last(x0);
  for (long k = 1; k <= max_iter; ++k) {
    Vec next = normalized_map(spec, x);
    result.final_step = hilbert_metric(next, x);
    x = std::move(next);
    result.iterations = k;
    if (result.final_step < tol) {
      result.converged = true;
      break;
    }
  }
  const Vec fx = spec.eval(x);
  const Vec ratios = fx.cwiseQuotient(x);
  result.eigenvalue = fx(fx.size() - 1);
  result.ratio_min = ratios.minCoeff();
  result.ratio_max = ratios.maxCoeff();
  result.vector = std::move(x);
  return result;
}

double irreducible_spectral_radius(const Mat& b, double tol, long max_iter) {
  const Index n = b.rows();
  if (n == 1) return b(0, 0);
  const double shift = std::max(b.maxCoeff(), std::numeric_limits<double>::min());
  const Mat shifted = b + shift * Mat::Identity(n, n);
  Vec x = Vec::Ones(n);
  double lo = 0.0, hi = 0.0;
  for (long k = 0; k < max_iter; ++k) {
    const Vec y = shifted * x;
    const Vec ratios = y.cwiseQuotient(x);
    lo = ratios.minCoeff();
    hi = ratios.maxCoeff();
    if (hi - lo <= tol * hi) break;
    x = y / y.maxCoeff();
  }
  return 0.5 * (lo + hi) - shift;
}

LinearOracleResult linear_oracle(const Mat& a) {
  if (a.rows() == 0 || a.rows() != a.cols()) throw DomainError("linear_oracle: matrix must be square and nonempty");
  require_finite(a.reshaped(), "linear_oracle");
  if ((a.array() < 0).any()) throw DomainError("linear_oracle: entries must be nonnegative");
  const int n = static_cast<int>(a.rows());

  // Tarjan's strongly connected components on G(A): edge i -> j iff a_ij > 0.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<bool> on_stack(n, false);
  int counter = 0, ncomp = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w = 0; w < n; ++w) {
      if (a(v, w) <= 0) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int w = -1;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);

  LinearOracleResult out;
  out.classes.assign(ncomp, {});
  for (int v = 0; v < n; ++v) out.classes[comp[v]].push_back(v);

  out.class_radius.resize(ncomp);
  out.final.assign(ncomp, true);
  for (int c = 0; c < ncomp; ++c) {
    const auto& members = out.classes[c];
    const auto k = static_cast<Index>(members.size());
    Mat sub(k, k);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) sub(i, j) = a(members[i], members[j]);
    out.class_radius[c] = irreducible_spectral_radius(sub);
    for (int v : members)
      for (int w = 0; w < n; ++w)
        if (a(v, w) > 0 && comp[w] != c) out.final[c] = false;
  }
  out.spectral_radius = *std::max_element(out.class_radius.begin(), out.class_radius.end());

  out.basic.resize(ncomp);
  int basic_final = 0;
  out.exists = true;
  for (int c = 0; c < ncomp; ++c) {
    out.basic[c] = std::abs(out.class_radius[c] - out.spectral_radius) <= 1e-8 * out.spectral_radius;
    if (out.basic[c] != out.final[c]) out.exists = false;
    if (out.basic[c] && out.final[c]) ++basic_final;
  }
  out.unique = out.exists && basic_final == 1;
  return out;
}

bool is_order_preserving_homogeneous_probe(const ConeFunction& f, int n, int trials, std::uint64_t seed) {
  if (trials < 1) throw DomainError("probe: trials must be at least 1");
  Rng rng(seed);
  constexpr double kRel = 1e-9;
  try {
    for (int t = 0; t < trials; ++t) {
      Vec x(n), y(n);
      for (int i = 0; i < n; ++i) {
        x(i) = std::exp(rng.uniform(-3.0, 3.0));
        y(i) = rng.uniform() < 0.5 ? x(i) : x(i) * std::exp(rng.uniform(0.0, 1.0));
      }
      const Vec fx = f(x);
      const Vec fy = f(y);
      if (fx.size() != n || fy.size() != n) return false;
      for (int i = 0; i < n; ++i)
        if (fx(i) - fy(i) > kRel * std::max(std::abs(fx(i)), std::abs(fy(i)))) return false;

      const double alpha = std::pow(10.0, rng.uniform(-3.0, 3.0));
      const Vec fax = f(alpha * x);
      for (int i = 0; i < n; ++i)
        if (std::abs(fax(i) - alpha * fx(i)) > kRel * std::abs(alpha * fx(i))) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

bool is_order_preserving_homogeneous_probe(const MapSpec& spec, int trials, std::uint64_t seed) {
  return is_order_preserving_homogeneous_probe([&spec](const Vec& x) { return spec.eval(x); }, spec.dim(), trials,
                                               seed);
}

}  // namespace coneglow
