#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "finmeas/algebra.hpp"
#include "finmeas/rational.hpp"

namespace finmeas {

/// Finitely additive probability measure given by nonnegative atom weights
/// summing to exactly 1. Additivity holds by construction.
class Measure {
 public:
  /// Throws InputError for an empty vector, a negative weight, or a total
  /// other than 1.
  explicit Measure(std::vector<Rational> weights);

  static Measure uniform(std::size_t atom_count);
  static Measure point_mass(std::size_t atom_count, std::size_t atom);

  std::size_t atom_count() const noexcept { return weights_.size(); }
  const Rational& weight(std::size_t atom) const { return weights_[atom]; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }

  friend bool operator==(const Measure&, const Measure&) = default;

 private:
  std::vector<Rational> weights_;
};

/// Sum of the weights of the atoms in `a`.
Rational evaluate(const Measure& measure, const Element& a);

struct PositivityResult {
  bool holds = true;
  std::optional<Element> witness;  // nonzero element of measure zero
};

/// Every nonzero element of the algebra has positive measure; checked on
/// the algebra's atoms.
PositivityResult is_strictly_positive(const Measure& measure, const SetAlgebra& algebra);

/// Atomwise convex combination. Throws InputError unless the weights are
/// nonnegative, sum to 1, and match the measures in count and width.
Measure weighted_sum(const std::vector<Measure>& measures, const std::vector<Rational>& weights);

/// measure(a symmetric-difference b).
Rational symdiff_metric(const Measure& measure, const Element& a, const Element& b);

struct NonatomicResult {
  bool holds = true;
  std::vector<Element> partition;   // the algebra's atoms, when holds
  std::optional<Element> heavy_atom;  // first atom of measure >= eps otherwise
};

/// Whether 1 splits into algebra elements each of measure strictly below
/// eps. The atom partition is the finest, so it decides the question.
/// Throws InputError when eps <= 0.
NonatomicResult is_epsilon_nonatomic(const Measure& measure, const SetAlgebra& algebra,
                                     const Rational& eps);

}  // namespace finmeas
