#include "finmeas/nonatomic.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "finmeas/intersection.hpp"

namespace finmeas {

namespace {

// First pair (in member order) of disjoint members of `next` lying below `a`.
std::optional<std::pair<std::size_t, std::size_t>> find_split(const Family& next,
                                                              const Element& a) {
  std::vector<std::size_t> below;
  for (std::size_t j = 0; j < next.size(); ++j) {
    if (next[j].subset_of(a)) {
      below.push_back(j);
    }
  }
  for (std::size_t x = 0; x < below.size(); ++x) {
    for (std::size_t y = x + 1; y < below.size(); ++y) {
      if (next[below[x]].disjoint_from(next[below[y]])) {
        return std::make_pair(below[x], below[y]);
      }
    }
  }
  return std::nullopt;
}

// Splits are reused across the many refinements a certificate needs.
class Refiner {
 public:
  explicit Refiner(const LeveledDecomposition& dec) : dec_(dec) {}

  void refine(const Element& a, std::size_t n, std::size_t k, std::vector<Element>& out) {
    if (n == k) {
      out.push_back(a);
      return;
    }
    const auto& next = dec_.level(n + 1);
    auto key = std::make_pair(n, a);
    auto it = cache_.find(key);
    if (it == cache_.end()) {
      it = cache_.emplace(std::move(key), find_split(next, a)).first;
    }
    if (!it->second) {
      throw DecompositionFailure(n, dec_.level(n).find(a),
                                 "no disjoint pair in level " + std::to_string(n + 1) +
                                     " below " + a.bitstring() + " (level " + std::to_string(n) +
                                     ")");
    }
    const auto [b, c] = *it->second;
    refine(next[b], n + 1, k, out);
    refine(next[c], n + 1, k, out);
  }

 private:
  const LeveledDecomposition& dec_;
  std::map<std::pair<std::size_t, Element>, std::optional<std::pair<std::size_t, std::size_t>>>
      cache_;
};

void require_member(const LeveledDecomposition& dec, const Element& a, std::size_t n) {
  if (n > dec.depth()) {
    throw InputError("level " + std::to_string(n) + " exceeds decomposition depth " +
                     std::to_string(dec.depth()));
  }
  if (!dec.level(n).find(a)) {
    throw InputError("element " + a.bitstring() + " is not a member of level " +
                     std::to_string(n));
  }
}

void require_verified_through(const LeveledDecomposition& dec, std::size_t k) {
  const auto& verification = dec.verification();
  if (!verification) {
    throw InputError("decomposition has not been verified");
  }
  if (!verification->verified_through || *verification->verified_through < k) {
    throw DecompositionFailure(verification->failure_level.value_or(0),
                               verification->failure_member, verification->failure);
  }
}

Element dyadic_cell(std::size_t depth, std::size_t cell_depth, std::size_t index) {
  const std::size_t width = std::size_t{1} << depth;
  const std::size_t span = width >> cell_depth;
  Element::Bits bits(width);
  bits.set(index * span, span, true);
  return Element(std::move(bits));
}

}  // namespace

LeveledDecomposition::LeveledDecomposition(SetAlgebra ambient, std::vector<Family> levels)
    : ambient_(std::move(ambient)), levels_(std::move(levels)) {
  if (levels_.empty()) {
    throw InputError("decomposition needs at least one level");
  }
  for (std::size_t n = 0; n < levels_.size(); ++n) {
    for (std::size_t j = 0; j < levels_[n].size(); ++j) {
      if (!ambient_.contains(levels_[n][j])) {
        throw InputError("level " + std::to_string(n) + " member " + std::to_string(j) +
                         " is not an element of the ambient algebra");
      }
    }
  }
}

std::optional<std::size_t> LeveledDecomposition::verified_through() const {
  return verification_ ? verification_->verified_through : std::nullopt;
}

NestingCheck check_nesting(const LeveledDecomposition& dec) {
  for (std::size_t n = 0; n < dec.depth(); ++n) {
    const auto& next = dec.level(n + 1).members();
    std::unordered_set<Element, ElementHash> upper(next.begin(), next.end());
    const auto& current = dec.level(n);
    for (std::size_t j = 0; j < current.size(); ++j) {
      if (!upper.contains(current[j])) {
        return {false, std::make_pair(n, j)};
      }
    }
  }
  return {};
}

std::vector<LevelBound> check_intersection_bounds(const LeveledDecomposition& dec) {
  std::vector<LevelBound> bounds;
  for (std::size_t n = 0; n <= dec.depth(); ++n) {
    LevelBound bound;
    bound.level = n;
    bound.value = int_exact(dec.level(n)).value;
    bound.required = Rational::pow2(-static_cast<long>(n));
    bound.ok = bound.value >= bound.required;
    bounds.push_back(std::move(bound));
  }
  return bounds;
}

SplittingCheck check_splitting(const LeveledDecomposition& dec) {
  SplittingCheck result;
  for (std::size_t n = 0; n < dec.depth(); ++n) {
    const auto& current = dec.level(n);
    for (std::size_t j = 0; j < current.size(); ++j) {
      SplitEntry entry{n, j, find_split(dec.level(n + 1), current[j])};
      result.holds = result.holds && entry.witness.has_value();
      result.entries.push_back(std::move(entry));
    }
  }
  return result;
}

LeveledDecomposition verify_decomposition(LeveledDecomposition dec) {
  Verification v;
  v.nesting = check_nesting(dec);
  v.bounds = check_intersection_bounds(dec);
  v.splitting = check_splitting(dec);

  // Nesting or splitting failing at n breaks the step n -> n+1, so levels
  // 0..n still stand. A bound failing at n excludes level n itself.
  std::optional<std::size_t> limit = dec.depth();
  auto restrict_to = [&](std::optional<std::size_t> candidate, std::size_t level,
                         std::optional<std::size_t> member, std::string why) {
    const bool tighter = !candidate ? limit.has_value() : (limit && *candidate < *limit);
    if (tighter) {
      limit = candidate;
      v.failure_level = level;
      v.failure_member = member;
      v.failure = std::move(why);
    }
  };

  if (v.nesting.violation) {
    const auto [n, j] = *v.nesting.violation;
    restrict_to(n, n, j,
                "nesting fails: member " + std::to_string(j) + " of level " + std::to_string(n) +
                    " is missing from level " + std::to_string(n + 1));
  }
  for (const auto& bound : v.bounds) {
    if (!bound.ok) {
      restrict_to(bound.level == 0 ? std::nullopt : std::optional<std::size_t>(bound.level - 1),
                  bound.level, std::nullopt,
                  "intersection bound fails at level " + std::to_string(bound.level) + ": " +
                      bound.value.str() + " < " + bound.required.str());
      break;
    }
  }
  for (const auto& entry : v.splitting.entries) {
    if (!entry.witness) {
      restrict_to(entry.level, entry.level, entry.member,
                  "splitting fails: member " + std::to_string(entry.member) + " of level " +
                      std::to_string(entry.level) + " has no disjoint pair below it in level " +
                      std::to_string(entry.level + 1));
      break;
    }
  }
  v.verified_through = limit;
  dec.verification_ = std::move(v);
  return dec;
}

std::vector<Element> disjoint_refinement(const LeveledDecomposition& dec, const Element& a,
                                         std::size_t n, std::size_t k) {
  require_member(dec, a, n);
  if (k < n || k > dec.depth()) {
    throw InputError("refinement level " + std::to_string(k) + " must lie in [" +
                     std::to_string(n) + ", " + std::to_string(dec.depth()) + "]");
  }
  std::vector<Element> out;
  Refiner(dec).refine(a, n, k, out);
  return out;
}

std::vector<Measure> level_measures(const LeveledDecomposition& dec) {
  std::vector<Measure> measures;
  for (std::size_t n = 0; n <= dec.depth(); ++n) {
    const auto& level = dec.level(n);
    auto solved = int_exact(level);
    const Rational bound = Rational::pow2(-static_cast<long>(n));
    for (std::size_t j = 0; j < level.size(); ++j) {
      if (evaluate(solved.measure, level[j]) < bound) {
        throw DecompositionFailure(n, j,
                                   "intersection number of level " + std::to_string(n) + " is " +
                                       solved.value.str() + " < " + bound.str());
      }
    }
    measures.push_back(std::move(solved.measure));
  }
  return measures;
}

ClusterMeasure cluster_measure(const LeveledDecomposition& dec) {
  const std::size_t deepest = dec.depth();
  require_verified_through(dec, deepest);

  auto measures = level_measures(dec);
  ClusterMeasure result{std::move(measures.back()), {}};
  const Rational leaf_bound = Rational::pow2(-static_cast<long>(deepest));

  Refiner refiner(dec);
  for (std::size_t n = 0; n <= deepest; ++n) {
    const auto& level = dec.level(n);
    const Rational bound = Rational::pow2(-static_cast<long>(n));
    for (std::size_t j = 0; j < level.size(); ++j) {
      std::vector<Element> pieces;
      refiner.refine(level[j], n, deepest, pieces);

      Rational below;
      Element seen = Element::empty(dec.ambient().atom_count());
      for (const auto& piece : pieces) {
        const Rational mass = evaluate(result.measure, piece);
        if (!piece.subset_of(level[j]) || piece.intersects(seen) || mass < leaf_bound) {
          throw DecompositionFailure(n, j, "refinement certificate fails for member " +
                                               std::to_string(j) + " of level " +
                                               std::to_string(n));
        }
        seen = seen | piece;
        below += mass;
      }
      const Rational mass = evaluate(result.measure, level[j]);
      if (below < bound || mass < below) {
        throw DecompositionFailure(n, j, "measure bound 2^-" + std::to_string(n) +
                                             " fails for member " + std::to_string(j));
      }
      result.certificates.push_back({n, j, pieces.size(), mass, bound});
    }
  }
  return result;
}

SmallSubset small_positive_subset(const LeveledDecomposition& dec, const Measure& measure,
                                  const Element& a, std::size_t n, const Rational& eps) {
  require_member(dec, a, n);
  if (eps.sign() <= 0) {
    throw InputError("eps must be positive, got " + eps.str());
  }
  std::size_t k = n;
  while (!(Rational::pow2(static_cast<long>(n) - static_cast<long>(k)) < eps)) {
    ++k;
  }
  if (k > dec.depth()) {
    throw DepthInsufficient(k, dec.depth());
  }
  require_verified_through(dec, k);

  std::vector<Element> pieces;
  Refiner(dec).refine(a, n, k, pieces);
  SmallSubset best{pieces.front(), k, evaluate(measure, pieces.front()),
                   Rational::pow2(static_cast<long>(n) - static_cast<long>(k))};
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    Rational mass = evaluate(measure, pieces[i]);
    if (mass < best.measure) {
      best.subset = pieces[i];
      best.measure = std::move(mass);
    }
  }
  if (best.measure.is_zero()) {
    throw DecompositionFailure(k, dec.level(k).find(best.subset),
                               "measure vanishes on member " + best.subset.bitstring() +
                                   " of level " + std::to_string(k));
  }
  if (best.measure > best.bound) {
    throw std::logic_error("small_positive_subset: pieces below a exceed total mass 1");
  }
  return best;
}

LeveledDecomposition dyadic_decomposition(std::size_t depth, DyadicStyle style, std::size_t cap) {
  const std::size_t deepest_members =
      style == DyadicStyle::Cells
          ? (depth + 1 >= 63 ? cap + 1 : (std::size_t{1} << (depth + 1)) - 1)
          : (depth >= 6 ? cap + 1 : (std::size_t{1} << (std::size_t{1} << depth)) - 1);
  if (deepest_members > cap) {
    throw CapExceeded("dyadic decomposition of depth " + std::to_string(depth) +
                      " exceeds the materialization cap of " + std::to_string(cap) + " members");
  }

  const std::size_t width = std::size_t{1} << depth;
  std::vector<Family> levels;
  std::vector<Element> members;
  for (std::size_t n = 0; n <= depth; ++n) {
    if (style == DyadicStyle::Cells) {
      for (std::size_t j = 0; j < (std::size_t{1} << n); ++j) {
        members.push_back(dyadic_cell(depth, n, j));
      }
      levels.emplace_back(members);
      continue;
    }
    const std::size_t cells = std::size_t{1} << n;
    std::vector<Element> unions;
    for (std::size_t mask = 1; mask < (std::size_t{1} << cells); ++mask) {
      Element u = Element::empty(width);
      for (std::size_t j = 0; j < cells; ++j) {
        if ((mask >> j) & 1U) {
          u = u | dyadic_cell(depth, n, j);
        }
      }
      unions.push_back(std::move(u));
    }
    levels.emplace_back(std::move(unions));
  }
  return LeveledDecomposition(SetAlgebra::power_set(width), std::move(levels));
}

}  // namespace finmeas
