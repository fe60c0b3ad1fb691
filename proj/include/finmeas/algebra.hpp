#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace finmeas {

/// A member of a finite set algebra: a subset of the atom universe
/// {0, ..., width-1}. Binary operations require equal widths and throw
/// InputError otherwise.
class Element {
 public:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  Element() = default;
  explicit Element(std::size_t width) : bits_(width) {}
  explicit Element(Bits bits) : bits_(std::move(bits)) {}

  static Element empty(std::size_t width) { return Element(width); }
  static Element full(std::size_t width);
  static Element singleton(std::size_t width, std::size_t atom);
  static Element from_indices(std::size_t width, const std::vector<std::size_t>& atoms);
  /// Character i of the string is atom i. Throws InputError on bad characters.
  static Element from_bitstring(std::string_view text);

  std::size_t width() const noexcept { return bits_.size(); }
  bool contains(std::size_t atom) const { return bits_.test(atom); }
  bool is_zero() const { return bits_.none(); }
  bool is_one() const { return bits_.all(); }
  std::size_t count() const { return bits_.count(); }
  std::vector<std::size_t> indices() const;
  /// Atom 0 first.
  std::string bitstring() const;

  bool subset_of(const Element& other) const;
  bool intersects(const Element& other) const;
  bool disjoint_from(const Element& other) const { return !intersects(other); }

  Element operator&(const Element& other) const;
  Element operator|(const Element& other) const;
  Element operator^(const Element& other) const;
  Element operator-(const Element& other) const;  // set difference
  Element operator~() const;

  const Bits& bits() const noexcept { return bits_; }

  friend bool operator==(const Element&, const Element&) = default;
  friend bool operator<(const Element& a, const Element& b) {
    return a.bits_.size() != b.bits_.size() ? a.bits_.size() < b.bits_.size() : a.bits_ < b.bits_;
  }

 private:
  Bits bits_;
};

void require_same_width(const Element& a, const Element& b);

struct ElementHash {
  std::size_t operator()(const Element& e) const;
};

/// Default ceiling on materialized algebra size.
inline constexpr std::size_t kDefaultMaterializationCap = std::size_t{1} << 16;

/// A finite field of subsets of {0, ..., atom_count-1}: either the whole
/// power set (kept implicit) or an explicit sorted collection closed under
/// meet, join and complement.
class SetAlgebra {
 public:
  static SetAlgebra power_set(std::size_t atom_count);
  /// Trusts the caller that `elements` is closed; used by generate_subalgebra.
  static SetAlgebra from_closed(std::size_t atom_count, std::vector<Element> elements);

  std::size_t atom_count() const noexcept { return atom_count_; }
  bool is_power_set() const noexcept { return !elements_.has_value(); }
  bool contains(const Element& e) const;

  /// Explicit element list (sorted). Materializes the power set if needed,
  /// subject to `cap`.
  std::vector<Element> elements(std::size_t cap = kDefaultMaterializationCap) const;

  friend bool operator==(const SetAlgebra&, const SetAlgebra&) = default;

 private:
  SetAlgebra(std::size_t atom_count, std::optional<std::vector<Element>> elements)
      : atom_count_(atom_count), elements_(std::move(elements)) {}

  std::size_t atom_count_ = 0;
  std::optional<std::vector<Element>> elements_;
};

/// Nonempty indexed list of nonzero elements of a common width. Duplicates
/// are allowed; the intersection number counts repetitions.
class Family {
 public:
  /// Throws InputError if empty, mixed-width, or containing the zero element.
  explicit Family(std::vector<Element> members);

  std::size_t atom_count() const noexcept { return atom_count_; }
  std::size_t size() const noexcept { return members_.size(); }
  const Element& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<Element>& members() const noexcept { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  /// Index of the first member equal to `e`.
  std::optional<std::size_t> find(const Element& e) const;

  friend bool operator==(const Family&, const Family&) = default;

 private:
  std::size_t atom_count_;
  std::vector<Element> members_;
};

/// Drops repeated members, keeping first occurrences in order.
Family deduplicate(const Family& family);

/// Smallest algebra containing the generators, computed as a fixpoint of
/// complement and pairwise meet. Throws InputError on mixed widths and
/// CapExceeded once more than `cap` elements appear.
SetAlgebra generate_subalgebra(std::size_t atom_count, const std::vector<Element>& generators,
                               std::size_t cap = kDefaultMaterializationCap);

/// Minimal nonzero elements; they partition the unit.
std::vector<Element> atoms_of(const SetAlgebra& algebra);

struct AntichainResult {
  bool holds = true;
  std::optional<std::pair<std::size_t, std::size_t>> violating_pair;
};

/// True iff distinct members are pairwise disjoint.
AntichainResult is_antichain(const Family& family);

struct AtomlessResult {
  bool holds = false;
  std::optional<Element> witness_atom;
};

/// Finite algebras always have atoms; reports the first one.
AtomlessResult is_atomless(const SetAlgebra& algebra);

}  // namespace finmeas
