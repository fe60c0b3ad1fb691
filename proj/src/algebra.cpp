#include "finmeas/algebra.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include <boost/functional/hash.hpp>

#include "finmeas/errors.hpp"

namespace finmeas {

Element Element::full(std::size_t width) {
  Bits bits(width);
  bits.set();
  return Element(std::move(bits));
}

Element Element::singleton(std::size_t width, std::size_t atom) {
  if (atom >= width) {
    throw InputError("atom index " + std::to_string(atom) + " out of range for width " +
                     std::to_string(width));
  }
  Bits bits(width);
  bits.set(atom);
  return Element(std::move(bits));
}

Element Element::from_indices(std::size_t width, const std::vector<std::size_t>& atoms) {
  Bits bits(width);
  for (const auto atom : atoms) {
    if (atom >= width) {
      throw InputError("atom index " + std::to_string(atom) + " out of range for width " +
                       std::to_string(width));
    }
    bits.set(atom);
  }
  return Element(std::move(bits));
}

Element Element::from_bitstring(std::string_view text) {
  Bits bits(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits.set(i);
    } else if (text[i] != '0') {
      throw InputError("bitstring may contain only 0 and 1: '" + std::string(text) + "'");
    }
  }
  return Element(std::move(bits));
}

std::vector<std::size_t> Element::indices() const {
  std::vector<std::size_t> out;
  for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
    out.push_back(i);
  }
  return out;
}

std::string Element::bitstring() const {
  std::string out(bits_.size(), '0');
  for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
    out[i] = '1';
  }
  return out;
}

void require_same_width(const Element& a, const Element& b) {
  if (a.width() != b.width()) {
    throw InputError("element width mismatch: " + std::to_string(a.width()) + " vs " +
                     std::to_string(b.width()));
  }
}

bool Element::subset_of(const Element& other) const {
  require_same_width(*this, other);
  return bits_.is_subset_of(other.bits_);
}

bool Element::intersects(const Element& other) const {
  require_same_width(*this, other);
  return bits_.intersects(other.bits_);
}

Element Element::operator&(const Element& other) const {
  require_same_width(*this, other);
  return Element(bits_ & other.bits_);
}

Element Element::operator|(const Element& other) const {
  require_same_width(*this, other);
  return Element(bits_ | other.bits_);
}

Element Element::operator^(const Element& other) const {
  require_same_width(*this, other);
  return Element(bits_ ^ other.bits_);
}

Element Element::operator-(const Element& other) const {
  require_same_width(*this, other);
  return Element(bits_ - other.bits_);
}

Element Element::operator~() const { return Element(~bits_); }

std::size_t ElementHash::operator()(const Element& e) const { return boost::hash_value(e.bits()); }

SetAlgebra SetAlgebra::power_set(std::size_t atom_count) {
  if (atom_count == 0) {
    throw InputError("set algebra needs at least one atom");
  }
  return SetAlgebra(atom_count, std::nullopt);
}

SetAlgebra SetAlgebra::from_closed(std::size_t atom_count, std::vector<Element> elements) {
  std::sort(elements.begin(), elements.end());
  return SetAlgebra(atom_count, std::move(elements));
}

bool SetAlgebra::contains(const Element& e) const {
  if (e.width() != atom_count_) {
    return false;
  }
  if (!elements_) {
    return true;
  }
  return std::binary_search(elements_->begin(), elements_->end(), e);
}

std::vector<Element> SetAlgebra::elements(std::size_t cap) const {
  if (elements_) {
    return *elements_;
  }
  if (atom_count_ >= 63 || (std::size_t{1} << atom_count_) > cap) {
    throw CapExceeded("power set over " + std::to_string(atom_count_) +
                      " atoms exceeds the materialization cap of " + std::to_string(cap));
  }
  std::vector<Element> out;
  const std::size_t total = std::size_t{1} << atom_count_;
  out.reserve(total);
  for (std::size_t mask = 0; mask < total; ++mask) {
    out.emplace_back(Element::Bits(atom_count_, mask));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Family::Family(std::vector<Element> members) : members_(std::move(members)) {
  if (members_.empty()) {
    throw InputError("family must have at least one member");
  }
  atom_count_ = members_.front().width();
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i].width() != atom_count_) {
      throw InputError("family member " + std::to_string(i) + " has width " +
                       std::to_string(members_[i].width()) + ", expected " +
                       std::to_string(atom_count_));
    }
    if (members_[i].is_zero()) {
      throw InputError("family member " + std::to_string(i) + " is the empty set");
    }
  }
}

std::optional<std::size_t> Family::find(const Element& e) const {
  const auto it = std::find(members_.begin(), members_.end(), e);
  if (it == members_.end()) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(it - members_.begin());
}

Family deduplicate(const Family& family) {
  std::unordered_set<Element, ElementHash> seen;
  std::vector<Element> kept;
  for (const auto& m : family) {
    if (seen.insert(m).second) {
      kept.push_back(m);
    }
  }
  return Family(std::move(kept));
}

SetAlgebra generate_subalgebra(std::size_t atom_count, const std::vector<Element>& generators,
                               std::size_t cap) {
  if (atom_count == 0) {
    throw InputError("set algebra needs at least one atom");
  }
  for (const auto& g : generators) {
    if (g.width() != atom_count) {
      throw InputError("generator width " + std::to_string(g.width()) +
                       " does not match atom count " + std::to_string(atom_count));
    }
  }

  // Complement plus pairwise meet reach every join by De Morgan. Each new
  // element is met against everything already present, so every pair is
  // considered once.
  std::unordered_set<Element, ElementHash> seen;
  std::vector<Element> present;
  std::deque<Element> pending{Element::empty(atom_count), Element::full(atom_count)};
  pending.insert(pending.end(), generators.begin(), generators.end());

  while (!pending.empty()) {
    Element next = std::move(pending.front());
    pending.pop_front();
    if (!seen.insert(next).second) {
      continue;
    }
    if (seen.size() > cap) {
      throw CapExceeded("generated algebra exceeds the materialization cap of " +
                        std::to_string(cap) + " elements");
    }
    Element complement = ~next;
    if (!seen.contains(complement)) {
      pending.push_back(std::move(complement));
    }
    for (const auto& other : present) {
      Element meet = next & other;
      if (!seen.contains(meet)) {
        pending.push_back(std::move(meet));
      }
    }
    present.push_back(std::move(next));
  }
  return SetAlgebra::from_closed(atom_count, std::move(present));
}

std::vector<Element> atoms_of(const SetAlgebra& algebra) {
  const std::size_t m = algebra.atom_count();
  std::vector<Element> atoms;
  if (algebra.is_power_set()) {
    for (std::size_t i = 0; i < m; ++i) {
      atoms.push_back(Element::singleton(m, i));
    }
    return atoms;
  }
  // The atom containing point i is the meet of all elements containing i.
  const auto elements = algebra.elements();
  Element covered = Element::empty(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (covered.contains(i)) {
      continue;
    }
    Element atom = Element::full(m);
    for (const auto& e : elements) {
      if (e.contains(i)) {
        atom = atom & e;
      }
    }
    covered = covered | atom;
    atoms.push_back(std::move(atom));
  }
  return atoms;
}

AntichainResult is_antichain(const Family& family) {
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (std::size_t j = i + 1; j < family.size(); ++j) {
      if (family[i].intersects(family[j])) {
        return {false, std::make_pair(i, j)};
      }
    }
  }
  return {true, std::nullopt};
}

AtomlessResult is_atomless(const SetAlgebra& algebra) {
  auto atoms = atoms_of(algebra);
  return {false, std::move(atoms.front())};
}

}  // namespace finmeas
