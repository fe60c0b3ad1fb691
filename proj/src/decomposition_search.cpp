#include "finmeas/decomposition_search.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include <boost/functional/hash.hpp>

#include "finmeas/errors.hpp"
#include "finmeas/intersection.hpp"

namespace finmeas {

namespace {

// Visits every size-r subset of {0..k-1}; stops early when visit returns false.
template <typename Visit>
bool for_each_subset(std::size_t k, std::size_t r, Visit&& visit) {
  std::vector<std::size_t> idx(r);
  std::iota(idx.begin(), idx.end(), 0);
  for (;;) {
    if (!visit(idx)) {
      return false;
    }
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == k - r + (i - 1)) {
      --i;
    }
    if (i == 0) {
      return true;
    }
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) {
      idx[j] = idx[j - 1] + 1;
    }
  }
}

void validate(const PieceCriterion& criterion) {
  if (const auto* linked = std::get_if<NLinked>(&criterion); linked && linked->n < 1) {
    throw InputError("n-linked criterion needs n >= 1");
  }
  if (const auto* bound = std::get_if<IntAtLeast>(&criterion)) {
    if (bound->beta > Rational(1)) {
      throw InputError("int_at_least(" + bound->beta.str() +
                       ") cannot be met even by single members");
    }
    if (bound->beta.sign() <= 0) {
      throw InputError("int_at_least threshold must be positive, got " + bound->beta.str());
    }
  }
}

using MemberSet = boost::dynamic_bitset<std::uint64_t>;

class PieceSearch {
 public:
  PieceSearch(const Family& family, const PieceCriterion& criterion)
      : family_(family), criterion_(criterion), order_(family.size()) {
    // Hardest first: fewest atoms, ties by index.
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return family[a].count() < family[b].count();
    });
  }

  PiecePartition run() {
    PiecePartition result;
    result.lower_bound = incompatible_core();
    greedy();
    if (best_.size() > result.lower_bound) {
      std::vector<MemberSet> pieces;
      branch(0, pieces);
    }
    for (const auto& piece : best_) {
      std::vector<std::size_t> members;
      for (auto i = piece.find_first(); i != MemberSet::npos; i = piece.find_next(i)) {
        members.push_back(i);
      }
      result.pieces.push_back(std::move(members));
    }
    std::sort(result.pieces.begin(), result.pieces.end());
    result.count = result.pieces.size();
    result.lower_bound = lower_bound_;
    result.nodes = nodes_;
    return result;
  }

 private:
  bool valid(const MemberSet& piece) {
    auto it = memo_.find(piece);
    if (it != memo_.end()) {
      return it->second;
    }
    std::vector<Element> members;
    for (auto i = piece.find_first(); i != MemberSet::npos; i = piece.find_next(i)) {
      members.push_back(family_[i]);
    }
    const bool ok = satisfies(Family(std::move(members)), criterion_);
    memo_.emplace(piece, ok);
    return ok;
  }

  MemberSet with(MemberSet piece, std::size_t member) {
    piece.set(member);
    return piece;
  }

  // Greedy clique in the graph of pairs that cannot share a piece.
  std::size_t incompatible_core() {
    const std::size_t k = family_.size();
    std::vector<std::vector<bool>> clash(k, std::vector<bool>(k, false));
    std::vector<std::size_t> degree(k, 0);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) {
        if (!valid(with(with(MemberSet(k), a), b))) {
          clash[a][b] = clash[b][a] = true;
          ++degree[a];
          ++degree[b];
        }
      }
    }
    std::vector<std::size_t> by_degree(k);
    std::iota(by_degree.begin(), by_degree.end(), 0);
    std::stable_sort(by_degree.begin(), by_degree.end(),
                     [&](std::size_t a, std::size_t b) { return degree[a] > degree[b]; });
    std::vector<std::size_t> core;
    for (const auto v : by_degree) {
      if (std::all_of(core.begin(), core.end(), [&](std::size_t u) { return clash[u][v]; })) {
        core.push_back(v);
      }
    }
    lower_bound_ = std::max<std::size_t>(core.size(), 1);
    return lower_bound_;
  }

  void greedy() {
    std::vector<MemberSet> pieces;
    for (const auto member : order_) {
      bool placed = false;
      for (auto& piece : pieces) {
        if (auto grown = with(piece, member); valid(grown)) {
          piece = std::move(grown);
          placed = true;
          break;
        }
      }
      if (!placed) {
        pieces.push_back(with(MemberSet(family_.size()), member));
      }
    }
    best_ = std::move(pieces);
  }

  void branch(std::size_t depth, std::vector<MemberSet>& pieces) {
    if (best_.size() == lower_bound_) {
      return;
    }
    ++nodes_;
    if (depth == order_.size()) {
      if (pieces.size() < best_.size()) {
        best_ = pieces;
      }
      return;
    }
    const std::size_t member = order_[depth];
    // Index loop: deeper levels push and pop pieces, which may reallocate.
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      auto grown = with(pieces[i], member);
      if (!valid(grown)) {
        continue;
      }
      std::swap(pieces[i], grown);
      branch(depth + 1, pieces);
      std::swap(pieces[i], grown);
    }
    // Opening a new piece; pieces are interchangeable so only one new slot.
    if (pieces.size() + 1 < best_.size()) {
      pieces.push_back(with(MemberSet(family_.size()), member));
      branch(depth + 1, pieces);
      pieces.pop_back();
    }
  }

  const Family& family_;
  const PieceCriterion& criterion_;
  std::vector<std::size_t> order_;
  std::unordered_map<MemberSet, bool, boost::hash<MemberSet>> memo_;
  std::vector<MemberSet> best_;
  std::size_t lower_bound_ = 1;
  std::size_t nodes_ = 0;
};

}  // namespace

LinkedResult is_n_linked(const Family& family, std::size_t n) {
  if (n < 1) {
    throw InputError("n must be at least 1");
  }
  // A subset smaller than n sits inside some size-n subset, whose nonempty
  // meet is also below it; so size exactly min(n, |family|) suffices.
  const std::size_t r = std::min(n, family.size());
  LinkedResult result;
  for_each_subset(family.size(), r, [&](const std::vector<std::size_t>& idx) {
    Element meet = family[idx.front()];
    for (std::size_t i = 1; i < idx.size() && !meet.is_zero(); ++i) {
      meet = meet & family[idx[i]];
    }
    if (meet.is_zero()) {
      result.holds = false;
      result.violating_subset = idx;
      return false;
    }
    return true;
  });
  return result;
}

CenteredResult is_centered(const Family& family) {
  Element meet = family[0];
  for (const auto& member : family) {
    meet = meet & member;
  }
  const auto first = meet.bits().find_first();
  if (first == Element::Bits::npos) {
    return {false, std::nullopt};
  }
  return {true, first};
}

bool satisfies(const Family& piece, const PieceCriterion& criterion) {
  return std::visit(
      [&](const auto& c) -> bool {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, NLinked>) {
          return is_n_linked(piece, c.n).holds;
        } else if constexpr (std::is_same_v<C, IntAtLeast>) {
          return int_exact(piece).value >= c.beta;
        } else {
          return is_centered(piece).holds;
        }
      },
      criterion);
}

PiecePartition min_pieces(const Family& family, const PieceCriterion& criterion) {
  validate(criterion);
  return PieceSearch(family, criterion).run();
}

std::vector<Family> partition_families(const Family& family, const PiecePartition& partition) {
  std::vector<Family> out;
  for (const auto& piece : partition.pieces) {
    std::vector<Element> members;
    for (const auto i : piece) {
      members.push_back(family[i]);
    }
    out.emplace_back(std::move(members));
  }
  return out;
}

std::vector<LinkedRow> linked_vs_int_report(const Family& family, std::size_t n_max) {
  if (n_max < 1) {
    throw InputError("n_max must be at least 1");
  }
  const Rational value = int_exact(family).value;
  std::vector<LinkedRow> rows;
  for (std::size_t n = 1; n <= n_max; ++n) {
    rows.push_back({n, is_n_linked(family, n).holds, value});
  }
  return rows;
}

}  // namespace finmeas
