#pragma once

#include <cstddef>
#include <vector>

#include "finmeas/algebra.hpp"
#include "finmeas/measure.hpp"
#include "finmeas/rational.hpp"

namespace finmeas {

/// Result of the direct multiset search. `best_upper_bound` is the smallest
/// ratio (largest common-point subfamily) / (multiset size) seen; it bounds
/// the intersection number from above. `exact` is set when that bound
/// equals the value computed by int_exact.
struct BruteForceBound {
  Rational best_upper_bound;
  std::vector<std::size_t> witness;  // member indices, nondecreasing
  bool exact = false;
};

/// Enumerates every multiset of members of size 1..max_multiset_size.
/// Among minimizers the smallest multiset (then the lexicographically first)
/// is reported. Throws InputError if max_multiset_size < 1.
BruteForceBound int_bruteforce(const Family& family, std::size_t max_multiset_size);

struct IntersectionNumber {
  Rational value;
  Measure measure;                 // attains min over members == value
  std::vector<Rational> adversary;  // distribution over members certifying optimality
};

/// Intersection number as the value of the atom-versus-member incidence
/// game: the best probability measure's worst member.
IntersectionNumber int_exact(const Family& family);

struct KelleyCheck {
  std::vector<Rational> values;
  bool all_positive = true;
};

KelleyCheck kelley_check(const std::vector<Family>& pieces);

/// Dyadic assembly weights 1/2, 1/4, ..., with the last weight doubled so
/// that the list sums to 1. Throws InputError for zero pieces.
std::vector<Rational> kelley_weights(std::size_t pieces);

struct KelleyMeasure {
  Measure measure;
  std::vector<Rational> weights;
  std::vector<Rational> lower_bounds;  // weight_n * int(piece_n)
};

/// Convex combination of each piece's optimal measure. Every member of piece
/// n receives at least lower_bounds[n]; verified before returning.
KelleyMeasure kelley_build_measure(const std::vector<Family>& pieces);

struct ApproximabilityCheck {
  std::vector<Rational> values;
  std::vector<std::size_t> failing;  // pieces with value < 1 - eps
  bool ok = true;
};

/// Every piece has intersection number at least 1 - eps. Throws InputError
/// unless 0 < eps < 1.
ApproximabilityCheck approximability_check(const std::vector<Family>& pieces, const Rational& eps);

struct ApproximatingSequenceCheck {
  bool ok = true;
  std::vector<Element> failures;  // targets no measure gives more than 1/2
};

ApproximatingSequenceCheck check_approximating_sequence(const std::vector<Measure>& measures,
                                                        const Family& targets);

}  // namespace finmeas
