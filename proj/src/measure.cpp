#include "finmeas/measure.hpp"

#include <string>

#include "finmeas/errors.hpp"

namespace finmeas {

namespace {

void require_width(const Measure& measure, const Element& a) {
  if (a.width() != measure.atom_count()) {
    throw InputError("element width " + std::to_string(a.width()) +
                     " does not match measure over " + std::to_string(measure.atom_count()) +
                     " atoms");
  }
}

}  // namespace

Measure::Measure(std::vector<Rational> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw InputError("measure needs at least one atom");
  }
  Rational total;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (weights_[i].sign() < 0) {
      throw InputError("negative weight " + weights_[i].str() + " on atom " + std::to_string(i));
    }
    total += weights_[i];
  }
  if (total != Rational(1)) {
    throw InputError("measure weights sum to " + total.str() + ", not 1");
  }
}

Measure Measure::uniform(std::size_t atom_count) {
  return Measure(std::vector<Rational>(atom_count, Rational(1, static_cast<long>(atom_count))));
}

Measure Measure::point_mass(std::size_t atom_count, std::size_t atom) {
  std::vector<Rational> weights(atom_count);
  weights.at(atom) = 1;
  return Measure(std::move(weights));
}

Rational evaluate(const Measure& measure, const Element& a) {
  require_width(measure, a);
  Rational sum;
  for (const auto i : a.indices()) {
    sum += measure.weight(i);
  }
  return sum;
}

PositivityResult is_strictly_positive(const Measure& measure, const SetAlgebra& algebra) {
  if (algebra.atom_count() != measure.atom_count()) {
    throw InputError("measure and algebra disagree on atom count");
  }
  for (auto& atom : atoms_of(algebra)) {
    if (evaluate(measure, atom).is_zero()) {
      return {false, std::move(atom)};
    }
  }
  return {true, std::nullopt};
}

Measure weighted_sum(const std::vector<Measure>& measures, const std::vector<Rational>& weights) {
  if (measures.empty() || measures.size() != weights.size()) {
    throw InputError("weighted_sum needs one weight per measure and at least one measure");
  }
  const std::size_t width = measures.front().atom_count();
  Rational total;
  for (std::size_t k = 0; k < measures.size(); ++k) {
    if (measures[k].atom_count() != width) {
      throw InputError("weighted_sum: measures over different atom counts");
    }
    if (weights[k].sign() < 0) {
      throw InputError("weighted_sum: negative weight " + weights[k].str());
    }
    total += weights[k];
  }
  if (total != Rational(1)) {
    throw InputError("weighted_sum: weights sum to " + total.str() + ", not 1");
  }
  std::vector<Rational> combined(width);
  for (std::size_t k = 0; k < measures.size(); ++k) {
    if (weights[k].is_zero()) {
      continue;
    }
    for (std::size_t i = 0; i < width; ++i) {
      combined[i] += weights[k] * measures[k].weight(i);
    }
  }
  return Measure(std::move(combined));
}

Rational symdiff_metric(const Measure& measure, const Element& a, const Element& b) {
  require_width(measure, a);
  return evaluate(measure, a ^ b);
}

NonatomicResult is_epsilon_nonatomic(const Measure& measure, const SetAlgebra& algebra,
                                     const Rational& eps) {
  if (eps.sign() <= 0) {
    throw InputError("eps must be positive, got " + eps.str());
  }
  if (algebra.atom_count() != measure.atom_count()) {
    throw InputError("measure and algebra disagree on atom count");
  }
  NonatomicResult result;
  for (auto& atom : atoms_of(algebra)) {
    if (evaluate(measure, atom) >= eps) {
      return {false, {}, std::move(atom)};
    }
    result.partition.push_back(std::move(atom));
  }
  return result;
}

}  // namespace finmeas
