#include "finmeas/intersection.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "finmeas/errors.hpp"
#include "finmeas/lp.hpp"

namespace finmeas {

namespace {

class MultisetSearch {
 public:
  MultisetSearch(const Family& family, std::size_t max_size)
      : family_(family), max_size_(max_size), coverage_(family.atom_count(), 0) {
    for (const auto& member : family) {
      member_atoms_.push_back(member.indices());
    }
  }

  void run() { extend(0, 0); }

  bool found() const { return !best_witness_.empty(); }
  Rational best() const {
    return Rational(static_cast<long>(best_max_), static_cast<long>(best_witness_.size()));
  }
  const std::vector<std::size_t>& witness() const { return best_witness_; }

 private:
  // Current multiset is `chosen`; extensions only use members >= first.
  void extend(std::size_t first, std::size_t current_max) {
    if (!chosen_.empty()) {
      consider(current_max);
    }
    if (chosen_.size() == max_size_) {
      return;
    }
    for (std::size_t j = first; j < family_.size(); ++j) {
      std::size_t next_max = current_max;
      for (const auto atom : member_atoms_[j]) {
        next_max = std::max(next_max, ++coverage_[atom]);
      }
      chosen_.push_back(j);
      extend(j, next_max);
      chosen_.pop_back();
      for (const auto atom : member_atoms_[j]) {
        --coverage_[atom];
      }
    }
  }

  void consider(std::size_t current_max) {
    if (!found()) {
      record(current_max);
      return;
    }
    // Compare current_max / size against best_max_ / best_size exactly.
    const std::size_t lhs = current_max * best_witness_.size();
    const std::size_t rhs = best_max_ * chosen_.size();
    if (lhs < rhs || (lhs == rhs && chosen_.size() < best_witness_.size())) {
      record(current_max);
    }
  }

  void record(std::size_t current_max) {
    best_max_ = current_max;
    best_witness_ = chosen_;
  }

  const Family& family_;
  std::size_t max_size_;
  std::vector<std::vector<std::size_t>> member_atoms_;
  std::vector<std::size_t> coverage_;
  std::vector<std::size_t> chosen_;
  std::size_t best_max_ = 0;
  std::vector<std::size_t> best_witness_;
};

const std::vector<Family>& require_pieces(const std::vector<Family>& pieces) {
  if (pieces.empty()) {
    throw InputError("at least one piece is required");
  }
  const std::size_t width = pieces.front().atom_count();
  for (const auto& piece : pieces) {
    if (piece.atom_count() != width) {
      throw InputError("pieces are over different atom counts");
    }
  }
  return pieces;
}

}  // namespace

BruteForceBound int_bruteforce(const Family& family, std::size_t max_multiset_size) {
  if (max_multiset_size < 1) {
    throw InputError("max_multiset_size must be at least 1");
  }
  MultisetSearch search(family, max_multiset_size);
  search.run();

  BruteForceBound result;
  result.best_upper_bound = search.best();
  result.witness = search.witness();
  result.exact = result.best_upper_bound == int_exact(family).value;
  return result;
}

IntersectionNumber int_exact(const Family& family) {
  const std::size_t atoms = family.atom_count();
  lp::Matrix incidence(atoms, lp::Vector(family.size()));
  for (std::size_t j = 0; j < family.size(); ++j) {
    if (family[j].is_zero()) {
      throw InputError("family member " + std::to_string(j) + " is the empty set");
    }
    for (const auto i : family[j].indices()) {
      incidence[i][j] = 1;
    }
  }
  auto game = lp::solve_game(incidence);
  return {game.value, Measure(std::move(game.row_strategy)), std::move(game.col_strategy)};
}

KelleyCheck kelley_check(const std::vector<Family>& pieces) {
  KelleyCheck result;
  for (const auto& piece : require_pieces(pieces)) {
    result.values.push_back(int_exact(piece).value);
    result.all_positive = result.all_positive && result.values.back().sign() > 0;
  }
  return result;
}

std::vector<Rational> kelley_weights(std::size_t pieces) {
  if (pieces == 0) {
    throw InputError("at least one piece is required");
  }
  std::vector<Rational> weights;
  for (std::size_t n = 0; n + 1 < pieces; ++n) {
    weights.push_back(Rational::pow2(-static_cast<long>(n + 1)));
  }
  weights.push_back(Rational::pow2(-static_cast<long>(pieces - 1)));
  return weights;
}

KelleyMeasure kelley_build_measure(const std::vector<Family>& pieces) {
  require_pieces(pieces);
  std::vector<Measure> measures;
  std::vector<Rational> values;
  for (const auto& piece : pieces) {
    auto solved = int_exact(piece);
    values.push_back(solved.value);
    measures.push_back(std::move(solved.measure));
  }

  auto weights = kelley_weights(pieces.size());
  KelleyMeasure result{weighted_sum(measures, weights), weights, {}};
  for (std::size_t n = 0; n < pieces.size(); ++n) {
    result.lower_bounds.push_back(weights[n] * values[n]);
    for (const auto& member : pieces[n]) {
      if (evaluate(result.measure, member) < result.lower_bounds.back()) {
        throw std::logic_error("kelley_build_measure: lower bound violated in piece " +
                               std::to_string(n));
      }
    }
  }
  return result;
}

ApproximabilityCheck approximability_check(const std::vector<Family>& pieces,
                                           const Rational& eps) {
  if (eps.sign() <= 0 || eps >= Rational(1)) {
    throw InputError("eps must lie strictly between 0 and 1, got " + eps.str());
  }
  const Rational threshold = Rational(1) - eps;
  ApproximabilityCheck result;
  for (const auto& piece : require_pieces(pieces)) {
    result.values.push_back(int_exact(piece).value);
    if (result.values.back() < threshold) {
      result.failing.push_back(result.values.size() - 1);
    }
  }
  result.ok = result.failing.empty();
  return result;
}

ApproximatingSequenceCheck check_approximating_sequence(const std::vector<Measure>& measures,
                                                        const Family& targets) {
  for (const auto& measure : measures) {
    if (measure.atom_count() != targets.atom_count()) {
      throw InputError("measures and targets disagree on atom count");
    }
  }
  const Rational half(1, 2);
  ApproximatingSequenceCheck result;
  for (const auto& target : targets) {
    const bool covered = std::any_of(measures.begin(), measures.end(), [&](const Measure& m) {
      return evaluate(m, target) > half;
    });
    if (!covered) {
      result.failures.push_back(target);
    }
  }
  result.ok = result.failures.empty();
  return result;
}

}  // namespace finmeas
