#include <doctest.h>

#include <random>

#include "finmeas/algebra.hpp"
#include "finmeas/errors.hpp"
#include "support/oracles.hpp"

using finmeas::Element;
using finmeas::Family;
using finmeas::SetAlgebra;
namespace t = finmeas::testing;

namespace {

Element bits(const char* s) { return Element::from_bitstring(s); }

std::vector<Element> singletons(std::size_t m) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < m; ++i) {
    out.push_back(Element::singleton(m, i));
  }
  return out;
}

}  // namespace

TEST_CASE("element basics") {
  const auto a = bits("1100");
  CHECK(a.width() == 4);
  CHECK(a.indices() == std::vector<std::size_t>{0, 1});
  CHECK(a.bitstring() == "1100");
  CHECK((~a).bitstring() == "0011");
  CHECK((a & bits("0110")).bitstring() == "0100");
  CHECK((a ^ bits("0110")).bitstring() == "1010");
  CHECK((a - bits("0110")).bitstring() == "1000");
  CHECK(bits("0100").subset_of(a));
  CHECK_THROWS_AS(a & bits("110"), finmeas::InputError);
  CHECK_THROWS_AS(Element::from_bitstring("10x"), finmeas::InputError);
  CHECK_THROWS_AS(Element::singleton(3, 3), finmeas::InputError);
}

TEST_CASE("family invariants") {
  CHECK_THROWS_AS(Family({}), finmeas::InputError);
  CHECK_THROWS_AS(Family({bits("000")}), finmeas::InputError);
  CHECK_THROWS_AS(Family({bits("100"), bits("10")}), finmeas::InputError);
  const Family f({bits("100"), bits("010"), bits("100")});
  CHECK(f.size() == 3);
  CHECK(finmeas::deduplicate(f).size() == 2);
  CHECK(f.find(bits("010")) == 1U);
  CHECK_FALSE(f.find(bits("001")).has_value());
}

TEST_CASE("generate_subalgebra fixtures") {
  SUBCASE("no generators gives the trivial algebra") {
    const auto alg = finmeas::generate_subalgebra(3, {});
    const auto elems = alg.elements();
    REQUIRE(elems.size() == 2);
    CHECK(alg.contains(Element::empty(3)));
    CHECK(alg.contains(Element::full(3)));
  }
  SUBCASE("singletons give the power set") {
    CHECK(finmeas::generate_subalgebra(3, singletons(3)).elements().size() == 8);
  }
  SUBCASE("two overlapping sets separate all three atoms") {
    const auto alg = finmeas::generate_subalgebra(3, {bits("110"), bits("011")});
    CHECK(alg.elements().size() == 8);
    CHECK(t::partition_cell_count(3, {bits("110"), bits("011")}) == 3);
    const auto atoms = finmeas::atoms_of(alg);
    std::vector<Element> expected{bits("001"), bits("010"), bits("100")};
    std::sort(expected.begin(), expected.end());
    CHECK(t::minimal_nonzero(alg.elements()) == expected);
    CHECK(atoms.size() == 3);
  }
  SUBCASE("width mismatch") {
    CHECK_THROWS_AS(finmeas::generate_subalgebra(3, {bits("11")}), finmeas::InputError);
  }
  SUBCASE("cap") {
    CHECK_THROWS_AS(finmeas::generate_subalgebra(5, singletons(5), 16), finmeas::CapExceeded);
    CHECK(finmeas::generate_subalgebra(5, singletons(5), 32).elements().size() == 32);
    CHECK_THROWS_AS(SetAlgebra::power_set(20).elements(), finmeas::CapExceeded);
  }
}

TEST_CASE("atoms_of fixtures") {
  CHECK(finmeas::atoms_of(SetAlgebra::power_set(4)) == singletons(4));
  const auto trivial = finmeas::generate_subalgebra(4, {});
  CHECK(finmeas::atoms_of(trivial) == std::vector<Element>{Element::full(4)});
  const auto alg = finmeas::generate_subalgebra(3, {bits("110")});
  auto atoms = finmeas::atoms_of(alg);
  std::sort(atoms.begin(), atoms.end());
  CHECK(atoms == t::minimal_nonzero(alg.elements()));
  CHECK(atoms.size() == 2);
}

TEST_CASE("is_antichain") {
  CHECK(finmeas::is_antichain(Family(singletons(4))).holds);
  const auto r = finmeas::is_antichain(Family({bits("1100"), bits("0110")}));
  CHECK_FALSE(r.holds);
  CHECK(r.violating_pair == std::make_pair(std::size_t{0}, std::size_t{1}));
  CHECK_FALSE(finmeas::is_antichain(t::fano_lines()).holds);
}

TEST_CASE("is_atomless is false for every finite algebra") {
  const auto p = finmeas::is_atomless(SetAlgebra::power_set(3));
  CHECK_FALSE(p.holds);
  CHECK(p.witness_atom->count() == 1);
  const auto trivial = finmeas::is_atomless(finmeas::generate_subalgebra(3, {}));
  CHECK_FALSE(trivial.holds);
  CHECK(trivial.witness_atom == Element::full(3));
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Element> gens;
    for (std::size_t g = 0; g < 3; ++g) {
      gens.push_back(t::random_element(rng, 5, false));
    }
    CHECK_FALSE(finmeas::is_atomless(finmeas::generate_subalgebra(5, gens)).holds);
  }
}

TEST_CASE("algebra properties on random generators") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = t::uniform(rng, 1, 7);
    std::vector<Element> gens;
    for (std::size_t g = 0, k = t::uniform(rng, 0, 4); g < k; ++g) {
      gens.push_back(t::random_element(rng, m, false));
    }
    CAPTURE(trial);
    const auto alg = finmeas::generate_subalgebra(m, gens);
    const auto elems = alg.elements();

    // Size is 2^(number of partition cells).
    CHECK(elems.size() == (std::size_t{1} << t::partition_cell_count(m, gens)));

    // Idempotent.
    CHECK(finmeas::generate_subalgebra(m, elems) == alg);

    // Atoms: minimal elements, an antichain, joining to 1.
    auto atoms = finmeas::atoms_of(alg);
    Element join = Element::empty(m);
    for (const auto& a : atoms) {
      join = join | a;
    }
    CHECK(join.is_one());
    CHECK(finmeas::is_antichain(Family(atoms)).holds);
    std::sort(atoms.begin(), atoms.end());
    CHECK(atoms == t::minimal_nonzero(elems));

    // Closed, and De Morgan on random triples.
    for (int k = 0; k < 5; ++k) {
      const auto& a = elems[rng() % elems.size()];
      const auto& b = elems[rng() % elems.size()];
      CHECK(alg.contains(a | b));
      CHECK(alg.contains(~a));
      CHECK(~(a | b) == (~a & ~b));
      CHECK(~(a & b) == (~a | ~b));
    }
  }
}
