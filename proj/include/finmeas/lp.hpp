#pragma once

#include <cstddef>
#include <vector>

#include "finmeas/rational.hpp"

namespace finmeas::lp {

using Vector = std::vector<Rational>;
using Matrix = std::vector<Vector>;

enum class Sense { Maximize, Minimize };
enum class Status { Optimal, Infeasible, Unbounded };

/// Outcome of an exact simplex solve over the program
///   optimize c.x  subject to  A x <= b,  x >= 0.
///
/// When optimal, `duals` holds multipliers y >= 0 with A^T y >= c (for
/// maximization; A^T y >= -c for minimization) and b.y equal to the optimum
/// (negated for minimization). The solver checks both certificates exactly
/// before returning.
struct LpResult {
  Status status = Status::Infeasible;
  Vector x;
  Vector duals;
  Rational objective;
  std::size_t pivots = 0;
};

/// Two-phase dictionary simplex with Bland's rule. Throws InputError on
/// inconsistent dimensions.
LpResult simplex_solve(const Matrix& constraints, const Vector& rhs, const Vector& objective,
                       Sense sense = Sense::Maximize);

/// Mixed-strategy solution of a zero-sum game where the row player
/// maximizes and the column player minimizes.
struct GameSolution {
  Rational value;
  Vector row_strategy;
  Vector col_strategy;
};

/// Solves the matrix game exactly. The returned strategies satisfy
/// min_j (p M)_j == value == max_i (M q)_i; this is asserted before return.
/// Throws InputError for an empty or ragged matrix.
GameSolution solve_game(const Matrix& payoff);

}  // namespace finmeas::lp
