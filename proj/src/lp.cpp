#include "finmeas/lp.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "finmeas/errors.hpp"

namespace finmeas::lp {

namespace {

// Dictionary (KACTL layout). Row i < m expresses basic variable B[i] as
//   B[i] = D[i][n+1] - sum_j D[i][j] * N[j].
// Row m is the objective, row m+1 the phase-one objective; column n holds
// the auxiliary variable (index -1) used to reach a feasible basis.
// Original variables are 0..n-1, slacks n..n+m-1.
class Dictionary {
 public:
  Dictionary(const Matrix& a, const Vector& b, const Vector& c)
      : m_(b.size()), n_(c.size()), basic_(m_), nonbasic_(n_ + 1),
        table_(m_ + 2, Vector(n_ + 2)) {
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        table_[i][j] = a[i][j];
      }
      basic_[i] = static_cast<long>(n_ + i);
      table_[i][n_] = -1;
      table_[i][n_ + 1] = b[i];
    }
    for (std::size_t j = 0; j < n_; ++j) {
      nonbasic_[j] = static_cast<long>(j);
      table_[m_][j] = -c[j];
    }
    nonbasic_[n_] = -1;
    table_[m_ + 1][n_] = 1;
  }

  Status solve() {
    std::size_t r = 0;
    for (std::size_t i = 1; i < m_; ++i) {
      if (table_[i][n_ + 1] < table_[r][n_ + 1]) {
        r = i;
      }
    }
    if (m_ > 0 && table_[r][n_ + 1].sign() < 0) {
      pivot(r, n_);
      if (!optimize(2) || table_[m_ + 1][n_ + 1].sign() < 0) {
        return Status::Infeasible;
      }
      for (std::size_t i = 0; i < m_; ++i) {
        if (basic_[i] != -1) {
          continue;
        }
        // Degenerate: auxiliary still basic at zero. Swap it for any
        // variable with a nonzero coefficient in its row.
        std::optional<std::size_t> s;
        for (std::size_t j = 0; j <= n_; ++j) {
          if (!table_[i][j].is_zero() && (!s || nonbasic_[j] < nonbasic_[*s])) {
            s = j;
          }
        }
        if (s) {
          pivot(i, *s);
        }
      }
    }
    return optimize(1) ? Status::Optimal : Status::Unbounded;
  }

  Vector primal() const {
    Vector x(n_);
    for (std::size_t i = 0; i < m_; ++i) {
      if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) {
        x[static_cast<std::size_t>(basic_[i])] = table_[i][n_ + 1];
      }
    }
    return x;
  }

  Vector dual() const {
    Vector y(m_);
    for (std::size_t j = 0; j <= n_; ++j) {
      if (nonbasic_[j] >= static_cast<long>(n_)) {
        y[static_cast<std::size_t>(nonbasic_[j]) - n_] = table_[m_][j];
      }
    }
    return y;
  }

  const Rational& objective() const { return table_[m_][n_ + 1]; }
  std::size_t pivots() const { return pivots_; }

 private:
  void pivot(std::size_t r, std::size_t s) {
    const Rational inv = Rational(1) / table_[r][s];
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i == r || table_[i][s].is_zero()) {
        continue;
      }
      const Rational factor = table_[i][s] * inv;
      for (std::size_t j = 0; j < n_ + 2; ++j) {
        if (!table_[r][j].is_zero()) {
          table_[i][j] -= table_[r][j] * factor;
        }
      }
      table_[i][s] = table_[r][s] * factor;
    }
    for (std::size_t j = 0; j < n_ + 2; ++j) {
      if (j != s) {
        table_[r][j] *= inv;
      }
    }
    for (std::size_t i = 0; i < m_ + 2; ++i) {
      if (i != r) {
        table_[i][s] *= -inv;
      }
    }
    table_[r][s] = inv;
    std::swap(basic_[r], nonbasic_[s]);
    ++pivots_;
  }

  // Bland's rule: entering variable is the lowest-indexed improving one,
  // leaving variable the lowest-indexed among minimum-ratio rows.
  bool optimize(int phase) {
    const std::size_t row = m_ + static_cast<std::size_t>(phase) - 1;
    for (;;) {
      std::optional<std::size_t> s;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (nonbasic_[j] == -phase || table_[row][j].sign() >= 0) {
          continue;
        }
        if (!s || nonbasic_[j] < nonbasic_[*s]) {
          s = j;
        }
      }
      if (!s) {
        return true;
      }
      std::optional<std::size_t> r;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        if (table_[i][*s].sign() <= 0) {
          continue;
        }
        const Rational ratio = table_[i][n_ + 1] / table_[i][*s];
        if (!r || ratio < best || (ratio == best && basic_[i] < basic_[*r])) {
          r = i;
          best = ratio;
        }
      }
      if (!r) {
        return false;
      }
      pivot(*r, *s);
    }
  }

  std::size_t m_;
  std::size_t n_;
  std::vector<long> basic_;
  std::vector<long> nonbasic_;
  Matrix table_;
  std::size_t pivots_ = 0;
};

Rational dot(const Vector& a, const Vector& b) {
  Rational sum;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i].is_zero() && !b[i].is_zero()) {
      sum += a[i] * b[i];
    }
  }
  return sum;
}

void certify(const Matrix& a, const Vector& b, const Vector& c, const LpResult& result) {
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (result.x[j].sign() < 0) {
      throw std::logic_error("simplex: negative primal variable");
    }
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (dot(a[i], result.x) > b[i]) {
      throw std::logic_error("simplex: primal infeasible at row " + std::to_string(i));
    }
    if (result.duals[i].sign() < 0) {
      throw std::logic_error("simplex: negative dual");
    }
  }
  for (std::size_t j = 0; j < c.size(); ++j) {
    Rational column;
    for (std::size_t i = 0; i < b.size(); ++i) {
      column += a[i][j] * result.duals[i];
    }
    if (column < c[j]) {
      throw std::logic_error("simplex: reduced cost has wrong sign at column " + std::to_string(j));
    }
  }
  if (dot(c, result.x) != dot(b, result.duals)) {
    throw std::logic_error("simplex: nonzero duality gap");
  }
}

}  // namespace

LpResult simplex_solve(const Matrix& constraints, const Vector& rhs, const Vector& objective,
                       Sense sense) {
  if (constraints.size() != rhs.size()) {
    throw InputError("simplex: " + std::to_string(constraints.size()) + " constraint rows but " +
                     std::to_string(rhs.size()) + " right-hand sides");
  }
  for (const auto& row : constraints) {
    if (row.size() != objective.size()) {
      throw InputError("simplex: constraint row width differs from objective length");
    }
  }

  Vector c = objective;
  if (sense == Sense::Minimize) {
    for (auto& v : c) {
      v = -v;
    }
  }

  Dictionary dict(constraints, rhs, c);
  LpResult result;
  result.status = dict.solve();
  result.pivots = dict.pivots();
  if (result.status != Status::Optimal) {
    return result;
  }
  result.x = dict.primal();
  result.duals = dict.dual();
  certify(constraints, rhs, c, result);
  result.objective = sense == Sense::Minimize ? -dict.objective() : dict.objective();
  return result;
}

GameSolution solve_game(const Matrix& payoff) {
  if (payoff.empty() || payoff.front().empty()) {
    throw InputError("solve_game: empty payoff matrix");
  }
  const std::size_t rows = payoff.size();
  const std::size_t cols = payoff.front().size();
  Rational lowest = payoff[0][0];
  for (const auto& row : payoff) {
    if (row.size() != cols) {
      throw InputError("solve_game: ragged payoff matrix");
    }
    for (const auto& v : row) {
      lowest = std::min(lowest, v);
    }
  }

  // Shift so every entry is >= 1; then the column player's program
  //   max sum(y)  s.t.  P y <= 1,  y >= 0
  // is feasible at the origin and bounded, with optimum 1/value(P).
  const Rational shift = lowest.sign() > 0 ? Rational(0) : Rational(1) - lowest;
  Matrix shifted = payoff;
  for (auto& row : shifted) {
    for (auto& v : row) {
      v += shift;
    }
  }
  const LpResult lp = simplex_solve(shifted, Vector(rows, Rational(1)), Vector(cols, Rational(1)));
  if (lp.status != Status::Optimal || lp.objective.sign() <= 0) {
    throw std::logic_error("solve_game: column program not solved to a positive optimum");
  }

  GameSolution solution;
  solution.value = Rational(1) / lp.objective - shift;
  solution.col_strategy = lp.x;
  for (auto& q : solution.col_strategy) {
    q /= lp.objective;
  }
  solution.row_strategy = lp.duals;
  for (auto& p : solution.row_strategy) {
    p /= lp.objective;
  }

  // Zero duality gap, checked exactly.
  std::optional<Rational> guaranteed;
  for (std::size_t j = 0; j < cols; ++j) {
    Rational v;
    for (std::size_t i = 0; i < rows; ++i) {
      v += solution.row_strategy[i] * payoff[i][j];
    }
    guaranteed = guaranteed ? std::min(*guaranteed, v) : v;
  }
  std::optional<Rational> conceded;
  for (std::size_t i = 0; i < rows; ++i) {
    const Rational v = dot(payoff[i], solution.col_strategy);
    conceded = conceded ? std::max(*conceded, v) : v;
  }
  if (*guaranteed != solution.value || *conceded != solution.value) {
    throw std::logic_error("solve_game: strategies do not certify the game value");
  }
  return solution;
}

}  // namespace finmeas::lp
