#pragma once

#include "coneglow/core.hpp"

#include <string_view>
#include <vector>

namespace coneglow {

// One linear row a.x (op) rhs.
struct LinearRow {
  Vec coeffs;
  double rhs = 0.0;
};

enum class VarBound { NonNegative, Free };

// maximize objective.x subject to eq rows (a.x = b), ineq rows (a.x <= b) and
// per-variable lower bounds (0 or -inf). An empty `bounds` means all NonNegative.
struct LinearProgram {
  Vec objective;
  std::vector<LinearRow> equalities;
  std::vector<LinearRow> inequalities;
  std::vector<VarBound> bounds;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string_view to_string(LpStatus status);

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;  // objective.point, valid when Optimal
  Vec point;           // valid when Optimal
};

struct LpTolerances {
  double pivot = 1e-10;
  double feasibility = 1e-9;
  long max_pivots = 1'000'000;
};

inline constexpr Index kMaxLpSize = 10'000;

// Dense two-phase simplex with Bland's rule. Deterministic for a given input.
// Throws DomainError on malformed programs and NonterminationError when the pivot
// cap is reached.
LpOutcome solve_lp(const LinearProgram& program, const LpTolerances& tol = {});

// Largest violation of any constraint of `program` at `x`, after scaling every row
// by its largest absolute coefficient.
double max_scaled_violation(const LinearProgram& program, const Vec& x);

// Numerical rank of the columns of `m` (full-pivot elimination, relative pivot
// threshold `tol`).
Index numerical_rank(const Mat& m, double tol = 1e-10);

}  // namespace coneglow
