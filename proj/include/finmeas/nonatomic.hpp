#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finmeas/algebra.hpp"
#include "finmeas/errors.hpp"
#include "finmeas/measure.hpp"
#include "finmeas/rational.hpp"

namespace finmeas {

struct NestingCheck {
  bool holds = true;
  /// (n, member index in level n) of the first member missing from level n+1.
  std::optional<std::pair<std::size_t, std::size_t>> violation;
};

struct LevelBound {
  std::size_t level = 0;
  Rational value;     // intersection number of the level
  Rational required;  // 2^-level
  bool ok = true;
};

struct SplitEntry {
  std::size_t level = 0;
  std::size_t member = 0;  // index in `level`
  /// Indices into level+1 of disjoint members whose union lies below the member.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

struct SplittingCheck {
  bool holds = true;
  std::vector<SplitEntry> entries;
};

/// Outcome of running all three condition checkers. `verified_through` is
/// the largest K' such that levels 0..K' satisfy nesting, the bounds
/// int(level n) >= 2^-n, and splitting; empty when level 0 already fails.
struct Verification {
  std::optional<std::size_t> verified_through;
  NestingCheck nesting;
  std::vector<LevelBound> bounds;
  SplittingCheck splitting;
  /// First failure that limits verified_through, if any.
  std::optional<std::size_t> failure_level;
  std::optional<std::size_t> failure_member;
  std::string failure;
};

/// Finite chain of families B_0, B_1, ..., B_K over one ambient algebra.
class LeveledDecomposition {
 public:
  /// Throws InputError when there are no levels or a member is outside the
  /// ambient algebra.
  LeveledDecomposition(SetAlgebra ambient, std::vector<Family> levels);

  const SetAlgebra& ambient() const noexcept { return ambient_; }
  const std::vector<Family>& levels() const noexcept { return levels_; }
  const Family& level(std::size_t n) const { return levels_.at(n); }
  std::size_t depth() const noexcept { return levels_.size() - 1; }

  const std::optional<Verification>& verification() const noexcept { return verification_; }
  /// Depth through which the conditions are known to hold.
  std::optional<std::size_t> verified_through() const;

 private:
  friend LeveledDecomposition verify_decomposition(LeveledDecomposition dec);

  SetAlgebra ambient_;
  std::vector<Family> levels_;
  std::optional<Verification> verification_;
};

NestingCheck check_nesting(const LeveledDecomposition& dec);
std::vector<LevelBound> check_intersection_bounds(const LeveledDecomposition& dec);
SplittingCheck check_splitting(const LeveledDecomposition& dec);

/// Runs the three checkers and records the result on the returned value.
LeveledDecomposition verify_decomposition(LeveledDecomposition dec);

/// Refines `a`, a member of level n, into 2^(k-n) pairwise disjoint members
/// of level k lying below it, splitting recursively one level at a time.
/// Throws InputError if `a` is not in level n or k is out of range, and
/// DecompositionFailure naming the level and member where no split exists.
std::vector<Element> disjoint_refinement(const LeveledDecomposition& dec, const Element& a,
                                         std::size_t n, std::size_t k);

/// mu_n = optimal measure of level n, each checked against 2^-n on every
/// member of its level. Throws DecompositionFailure when a bound fails.
std::vector<Measure> level_measures(const LeveledDecomposition& dec);

struct LevelCertificate {
  std::size_t level = 0;
  std::size_t member = 0;
  std::size_t pieces = 0;  // disjoint deepest-level members found below it
  Rational measure;
  Rational bound;  // 2^-level
};

struct ClusterMeasure {
  Measure measure;
  std::vector<LevelCertificate> certificates;
};

/// The deepest level measure mu_K, with a certificate mu(a) >= 2^-n for
/// every member a of every level n, each backed by a disjoint refinement of
/// a into 2^(K-n) members of level K. Throws InputError for a decomposition
/// that was never verified and DecompositionFailure when verification
/// stopped short of the full depth.
ClusterMeasure cluster_measure(const LeveledDecomposition& dec);

/// Not enough levels to reach the requested precision.
class DepthInsufficient : public DecompositionFailure {
 public:
  DepthInsufficient(std::size_t needed, std::size_t available)
      : DecompositionFailure(needed, std::nullopt,
                             "refinement needs depth " + std::to_string(needed) +
                                 " but the decomposition stops at depth " +
                                 std::to_string(available)),
        needed_(needed) {}

  std::size_t needed_depth() const noexcept { return needed_; }

 private:
  std::size_t needed_;
};

struct SmallSubset {
  Element subset;
  std::size_t refinement_level = 0;  // k
  Rational measure;
  Rational bound;  // 2^(n-k), strictly below eps
};

/// Below `a` (a member of level n) finds b with 0 < measure(b) <= 2^(n-k) < eps,
/// using the least k with 2^(n-k) < eps: among the 2^(k-n) disjoint pieces
/// of the refinement, the lightest has measure at most 2^(n-k).
SmallSubset small_positive_subset(const LeveledDecomposition& dec, const Measure& measure,
                                  const Element& a, std::size_t n, const Rational& eps);

enum class DyadicStyle {
  /// Level n holds the dyadic cells of depth <= n (2^(n+1) - 1 members).
  Cells,
  /// Level n holds every nonzero union of depth-n cells (2^(2^n) - 1 members).
  Unions,
};

/// Decomposition of the power set over 2^depth atoms (the leaves of a
/// binary tree of the given depth). Throws CapExceeded when a level would
/// exceed `cap` members.
LeveledDecomposition dyadic_decomposition(std::size_t depth, DyadicStyle style = DyadicStyle::Cells,
                                          std::size_t cap = kDefaultMaterializationCap);

}  // namespace finmeas
