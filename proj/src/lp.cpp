#include "coneglow/lp.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <string>

namespace coneglow {

std::string_view to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal:
      return "optimal";
    case LpStatus::Infeasible:
      return "infeasible";
    case LpStatus::Unbounded:
      return "unbounded";
  }
  return "unknown";
}

namespace {

void validate(const LinearProgram& p) {
  const Index n = p.objective.size();
  if (n == 0) throw DomainError("solve_lp: empty objective");
  require_finite(p.objective, "solve_lp objective");
  if (!p.bounds.empty() && static_cast<Index>(p.bounds.size()) != n)
    throw DomainError("solve_lp: bounds length does not match objective");
  for (const auto* rows : {&p.equalities, &p.inequalities}) {
    for (const auto& row : *rows) {
      if (row.coeffs.size() != n) throw DomainError("solve_lp: row length does not match objective");
      require_finite(row.coeffs, "solve_lp row");
      if (!std::isfinite(row.rhs)) throw DomainError("solve_lp: non-finite right-hand side");
    }
  }
  const auto rows = static_cast<Index>(p.equalities.size() + p.inequalities.size());
  if (n > kMaxLpSize || rows > kMaxLpSize) throw BudgetError("solve_lp: program exceeds the dense solver guard");
}

// Tableau over columns [structural | slack | artificial | rhs]; the last row holds
// reduced costs and -objective.
class Simplex {
 public:
  Simplex(Mat tableau, std::vector<Index> basis, Index first_artificial, const LpTolerances& tol)
      : t_(std::move(tableau)), basis_(std::move(basis)), first_art_(first_artificial), tol_(tol) {}

  Index rows() const { return t_.rows() - 1; }
  Index cols() const { return t_.cols() - 1; }

  void set_costs(const Vec& costs) {
    t_.row(rows()).setZero();
    t_.row(rows()).head(cols()) = costs.transpose();
    for (Index i = 0; i < rows(); ++i) {
      const double cb = costs(basis_[i]);
      if (cb != 0.0) t_.row(rows()) -= cb * t_.row(i);
    }
  }

  // Returns false when the objective is unbounded above.
  bool optimize(bool allow_artificial) {
    const Index rhs = cols();
    for (;;) {
      Index enter = -1;
      for (Index j = 0; j < cols(); ++j) {
        if (!allow_artificial && j >= first_art_) break;
        if (t_(rows(), j) > tol_.pivot) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      Index leave = -1;
      double best = 0.0;
      for (Index i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= tol_.pivot) continue;
        const double ratio = t_(i, rhs) / a;
        if (leave < 0) {
          leave = i;
          best = ratio;
          continue;
        }
        const double slack = 1e-12 * (1.0 + std::abs(best));
        if (ratio < best - slack || (ratio <= best + slack && basis_[i] < basis_[leave])) {
          leave = i;
          best = std::min(best, ratio);
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }

  void pivot(Index r, Index c) {
    if (++pivots_ > tol_.max_pivots) throw NonterminationError("solve_lp: pivot cap reached");
    t_.row(r) /= t_(r, c);
    for (Index i = 0; i <= rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    t_(r, c) = 1.0;
    basis_[r] = c;
  }

  // Pivots basic artificials out where possible; rows that cannot be pivoted are
  // redundant and keep their artificial at zero.
  void expel_artificials() {
    for (Index i = 0; i < rows(); ++i) {
      if (basis_[i] < first_art_) continue;
      Index best = -1;
      double mag = tol_.pivot;
      for (Index j = 0; j < first_art_; ++j) {
        if (std::abs(t_(i, j)) > mag) {
          mag = std::abs(t_(i, j));
          best = j;
        }
      }
      if (best >= 0) pivot(i, best);
    }
  }

  double objective_value() const { return -t_(rows(), cols()); }

  Vec primal() const {
    Vec x = Vec::Zero(cols());
    for (Index i = 0; i < rows(); ++i) x(basis_[i]) = t_(i, cols());
    return x;
  }

 private:
  Mat t_;
  std::vector<Index> basis_;
  Index first_art_;
  LpTolerances tol_;
  long pivots_ = 0;
};

struct ScaledRow {
  Vec coeffs;
  double rhs;
  bool equality;
};

}  // namespace

LpOutcome solve_lp(const LinearProgram& program, const LpTolerances& tol) {
  validate(program);
  const Index nvars = program.objective.size();

  // Structural columns: x_j = pos_j - neg_j for free variables.
  std::vector<Index> pos(nvars), neg(nvars, -1);
  Index nstruct = 0;
  for (Index j = 0; j < nvars; ++j) {
    pos[j] = nstruct++;
    const bool free = !program.bounds.empty() && program.bounds[j] == VarBound::Free;
    if (free) neg[j] = nstruct++;
  }

  std::vector<ScaledRow> rows;
  auto add_rows = [&](const std::vector<LinearRow>& src, bool equality) -> bool {
    for (const auto& row : src) {
      const double scale = row.coeffs.cwiseAbs().maxCoeff();
      if (scale == 0.0) {
        const bool ok = equality ? std::abs(row.rhs) <= tol.feasibility : row.rhs >= -tol.feasibility;
        if (!ok) return false;
        continue;
      }
      rows.push_back({row.coeffs / scale, row.rhs / scale, equality});
    }
    return true;
  };
  if (!add_rows(program.inequalities, false) || !add_rows(program.equalities, true)) return {};

  const auto m = static_cast<Index>(rows.size());
  Index nslack = 0, nart = 0;
  for (const auto& r : rows) {
    if (!r.equality) ++nslack;
    if (r.equality || r.rhs < 0) ++nart;
  }
  const Index first_slack = nstruct;
  const Index first_art = nstruct + nslack;
  const Index ncols = first_art + nart;

  Mat t = Mat::Zero(m + 1, ncols + 1);
  std::vector<Index> basis(m);
  Index slack = first_slack, art = first_art;
  for (Index i = 0; i < m; ++i) {
    const auto& r = rows[i];
    const double sign = r.rhs < 0 ? -1.0 : 1.0;
    for (Index j = 0; j < nvars; ++j) {
      t(i, pos[j]) = sign * r.coeffs(j);
      if (neg[j] >= 0) t(i, neg[j]) = -sign * r.coeffs(j);
    }
    t(i, ncols) = sign * r.rhs;
    Index own_slack = -1;
    if (!r.equality) {
      own_slack = slack++;
      t(i, own_slack) = sign;
    }
    if (r.equality || r.rhs < 0) {
      t(i, art) = 1.0;
      basis[i] = art++;
    } else {
      basis[i] = own_slack;
    }
  }

  Simplex simplex(std::move(t), std::move(basis), first_art, tol);

  if (nart > 0) {
    Vec phase1 = Vec::Zero(ncols);
    phase1.tail(nart).setConstant(-1.0);
    simplex.set_costs(phase1);
    simplex.optimize(true);
    if (simplex.objective_value() < -tol.feasibility) return {};
    simplex.expel_artificials();
  }

  Vec costs = Vec::Zero(ncols);
  for (Index j = 0; j < nvars; ++j) {
    costs(pos[j]) = program.objective(j);
    if (neg[j] >= 0) costs(neg[j]) = -program.objective(j);
  }
  simplex.set_costs(costs);
  if (!simplex.optimize(false)) return {LpStatus::Unbounded, 0.0, {}};

  const Vec raw = simplex.primal();
  Vec x(nvars);
  for (Index j = 0; j < nvars; ++j) {
    x(j) = raw(pos[j]) - (neg[j] >= 0 ? raw(neg[j]) : 0.0);
  }
  return {LpStatus::Optimal, program.objective.dot(x), std::move(x)};
}

double max_scaled_violation(const LinearProgram& program, const Vec& x) {
  double worst = 0.0;
  auto scan = [&](const std::vector<LinearRow>& rows, bool equality) {
    for (const auto& row : rows) {
      const double scale = std::max(row.coeffs.cwiseAbs().maxCoeff(), 1e-300);
      const double r = (row.coeffs.dot(x) - row.rhs) / scale;
      worst = std::max(worst, equality ? std::abs(r) : r);
    }
  };
  scan(program.inequalities, false);
  scan(program.equalities, true);
  for (Index j = 0; j < x.size(); ++j) {
    const bool free = !program.bounds.empty() && program.bounds[j] == VarBound::Free;
    if (!free) worst = std::max(worst, -x(j));
  }
  return worst;
}

Index numerical_rank(const Mat& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::FullPivLU<Mat> lu(m);
  lu.setThreshold(tol);
  return lu.rank();
}

}  // namespace coneglow
