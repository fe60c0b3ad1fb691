// Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "finmeas/decomposition_search.hpp"
#include "finmeas/errors.hpp"
#include "finmeas/intersection.hpp"
#include "finmeas/measure.hpp"
#include "finmeas/nonatomic.hpp"
#include "support/cli_cases.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
namespace t = finmeas::testing;
using finmeas::Element;
using finmeas::Family;
using finmeas::Measure;
using finmeas::Rational;

namespace {

/// Collects failures for one criterion; `detail` summarizes what was run.
struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (failures.size() < 5) {
        failures.push_back(what);
      }
    }
  }
};

struct Criterion {
  std::string id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> body;
};

Rational min_over(const Measure& mu, const Family& f) {
  Rational best = 1;
  for (const auto& a : f) {
    best = std::min(best, finmeas::evaluate(mu, a));
  }
  return best;
}

Family subfamily(const Family& f, std::size_t mask) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (mask >> i & 1U) {
      out.push_back(f[i]);
    }
  }
  return Family(std::move(out));
}

Outcome ac1_duality() {
  Outcome o;
  std::mt19937_64 rng(1001);
  std::size_t count = 0;
  for (; count < 500; ++count) {
    const auto f = t::random_family(rng, t::uniform(rng, 3, 5), t::uniform(rng, 2, 5));
    const auto exact = finmeas::int_exact(f);
    const auto den = static_cast<std::size_t>(exact.value.denominator().get_ui());
    const auto brute = finmeas::int_bruteforce(f, den);
    o.require(brute.best_upper_bound == exact.value && brute.exact,
              "family " + std::to_string(count) + ": LP " + exact.value.str() + " vs multisets " +
                  brute.best_upper_bound.str());
    o.require(t::multiset_min_ratio(f, den) == exact.value,
              "family " + std::to_string(count) + ": independent multiset oracle disagrees");
  }
  o.detail = std::to_string(count) + " random families, LP value equals multiset bound at its denominator";
  return o;
}

Outcome ac2_fixtures() {
  Outcome o;
  const std::vector<std::pair<std::string, std::pair<Family, Rational>>> cases{
      {"fano", {t::fano_lines(), Rational(3, 7)}},
      {"triangle", {t::family_of({"110", "011", "101"}), Rational(2, 3)}},
      {"disjoint", {t::family_of({"1100", "0011"}), Rational(1, 2)}},
      {"centered", {t::family_of({"1100", "1010", "1001", "1111"}), Rational(1)}},
  };
  std::string values;
  for (const auto& [name, c] : cases) {
    const auto& [family, expected] = c;
    const auto got = finmeas::int_exact(family).value;
    o.require(got == expected, name + ": got " + got.str() + ", expected " + expected.str());
    const auto den = static_cast<std::size_t>(expected.denominator().get_ui());
    o.require(t::multiset_min_ratio(family, den) == expected, name + ": multiset oracle disagrees");
    values += (values.empty() ? "" : ", ") + name + " " + got.str();
  }
  o.detail = values;
  return o;
}

Outcome ac3_dyadic() {
  Outcome o;
  std::size_t subsets = 0;
  for (std::size_t depth = 1; depth <= 6; ++depth) {
    const std::string tag = "D=" + std::to_string(depth) + ": ";
    const auto dec = finmeas::verify_decomposition(finmeas::dyadic_decomposition(depth));
    const auto& v = *dec.verification();
    o.require(v.nesting.holds, tag + "nesting fails");
    o.require(v.splitting.holds, tag + "splitting fails");
    o.require(dec.verified_through() == depth, tag + "not verified through full depth");
    for (const auto& b : v.bounds) {
      o.require(b.value == Rational::pow2(-static_cast<long>(b.level)),
                tag + "level " + std::to_string(b.level) + " value " + b.value.str());
    }
    const auto cluster = finmeas::cluster_measure(dec);
    const std::size_t width = std::size_t{1} << depth;
    o.require(cluster.measure == Measure::uniform(width), tag + "cluster measure not uniform");
    for (std::size_t n = 0; n <= depth; ++n) {
      for (const auto& a : dec.level(n)) {
        o.require(finmeas::evaluate(cluster.measure, a) >= Rational::pow2(-static_cast<long>(n)),
                  tag + "bound fails on " + a.bitstring());
      }
    }

    // eps grid strictly above 2^-D: just above each power of two, the midpoints, and 1.
    std::vector<Rational> grid{Rational(1)};
    const Rational tiny = Rational::pow2(-static_cast<long>(depth) - 4);
    for (std::size_t k = 0; k <= depth; ++k) {
      const auto p = Rational::pow2(-static_cast<long>(k));
      grid.push_back(p + tiny);
      if (k > 0) {
        grid.push_back(p * Rational(3, 2));
      }
    }
    for (std::size_t n = 0; n <= depth; ++n) {
      for (const auto& a : dec.level(n)) {
        for (const auto& eps : grid) {
          // Below a member of level n the finest reachable bound is 2^(n-D).
          if (!(eps > Rational::pow2(static_cast<long>(n) - static_cast<long>(depth)))) {
            continue;
          }
          const auto s = finmeas::small_positive_subset(dec, cluster.measure, a, n, eps);
          ++subsets;
          o.require(s.measure.sign() > 0 && s.measure < eps && s.subset.subset_of(a),
                    tag + "small subset fails at eps " + eps.str());
        }
      }
    }
    bool refused = false;
    try {
      finmeas::small_positive_subset(dec, cluster.measure, Element::full(width), 0,
                                 Rational::pow2(-static_cast<long>(depth)));
    } catch (const finmeas::DepthInsufficient&) {
      refused = true;
    }
    o.require(refused, tag + "eps = 2^-D should need more depth");
  }
  o.detail = "D = 1..6 verified, levels exact, uniform cluster measure, " + std::to_string(subsets) +
             " small subsets";
  return o;
}

Outcome ac4_kelley() {
  Outcome o;
  std::mt19937_64 rng(4004);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = t::uniform(rng, 1, 6);
    std::vector<Element> gens;
    for (std::size_t g = 0, k = t::uniform(rng, 0, 4); g < k; ++g) {
      gens.push_back(t::random_element(rng, m, false));
    }
    const auto alg = finmeas::generate_subalgebra(m, gens);
    std::vector<std::vector<Element>> buckets(t::uniform(rng, 1, 4));
    for (const auto& e : alg.elements()) {
      if (!e.is_zero()) {
        buckets[rng() % buckets.size()].push_back(e);
      }
    }
    std::vector<Family> pieces;
    for (auto& b : buckets) {
      if (!b.empty()) {
        pieces.emplace_back(std::move(b));
      }
    }
    const auto k = finmeas::kelley_build_measure(pieces);
    const std::string tag = "trial " + std::to_string(trial) + ": ";
    o.require(finmeas::is_strictly_positive(k.measure, alg).holds, tag + "not strictly positive");
    for (std::size_t p = 0; p < pieces.size(); ++p) {
      o.require(min_over(k.measure, pieces[p]) >= k.lower_bounds[p],
                tag + "piece " + std::to_string(p) + " below its bound");
    }
  }
  o.detail = "100 generated algebras, measures strictly positive, all piece bounds met";
  return o;
}

Outcome ac5_approximability() {
  Outcome o;
  std::mt19937_64 rng(5005);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t m = t::uniform(rng, 2, 5);
    std::vector<Family> pieces;
    for (std::size_t p = 0, k = t::uniform(rng, 1, 3); p < k; ++p) {
      pieces.push_back(t::random_family(rng, m, t::uniform(rng, 1, 4)));
    }
    std::vector<Rational> grid;
    for (long i = 1; i < 60; ++i) {
      grid.emplace_back(i, 60);
    }
    for (const auto& v : finmeas::kelley_check(pieces).values) {
      if (v < Rational(1)) {
        grid.push_back(Rational(1) - v);  // exact boundaries
      }
    }
    std::sort(grid.begin(), grid.end());
    bool seen_ok = false;
    for (const auto& eps : grid) {
      const bool ok = finmeas::approximability_check(pieces, eps).ok;
      o.require(!seen_ok || ok, "trial " + std::to_string(trial) + ": not monotone at " + eps.str());
      seen_ok = seen_ok || ok;
    }
  }
  const bool at = finmeas::approximability_check({t::fano_lines()}, Rational(4, 7)).ok;
  const bool below = finmeas::approximability_check({t::fano_lines()}, Rational(4, 7) - Rational(1, 10000)).ok;
  o.require(at, "Fano rejected at eps = 4/7");
  o.require(!below, "Fano accepted below eps = 4/7");
  o.detail = "100 random piece lists monotone over eps grids; Fano accepted exactly at 4/7";
  return o;
}

Outcome ac6_min_pieces() {
  Outcome o;
  std::mt19937_64 rng(6006);
  const std::vector<std::pair<std::string, finmeas::PieceCriterion>> criteria{
      {"centered", finmeas::Centered{}},
      {"2-linked", finmeas::NLinked{2}},
      {"int>=3/4", finmeas::IntAtLeast{Rational(3, 4)}}};
  std::size_t families = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const auto f = t::random_family(rng, t::uniform(rng, 2, 5), t::uniform(rng, 1, 8));
    const auto partitions = t::set_partitions(f.size());
    ++families;
    for (const auto& [name, c] : criteria) {
      std::map<std::size_t, bool> valid;
      auto ok_block = [&](const std::vector<std::size_t>& block) {
        std::size_t mask = 0;
        for (const auto i : block) {
          mask |= std::size_t{1} << i;
        }
        const auto it = valid.find(mask);
        if (it != valid.end()) {
          return it->second;
        }
        return valid[mask] = finmeas::satisfies(subfamily(f, mask), c);
      };
      std::size_t brute = f.size();
      for (const auto& p : partitions) {
        if (p.size() < brute && std::all_of(p.begin(), p.end(), ok_block)) {
          brute = p.size();
        }
      }
      const auto got = finmeas::min_pieces(f, c);
      bool pieces_ok = true;
      for (const auto& piece : got.pieces) {
        pieces_ok = pieces_ok && ok_block(piece);
      }
      const std::string tag = "trial " + std::to_string(trial) + " " + name + ": ";
      o.require(got.count == brute, tag + "search " + std::to_string(got.count) + " vs brute force " +
                                        std::to_string(brute));
      o.require(pieces_ok && got.pieces.size() == got.count, tag + "returned pieces invalid");
    }
  }
  o.detail = std::to_string(families) + " families x 3 criteria agree with set-partition enumeration";
  return o;
}

Outcome ac7_measure_axioms() {
  Outcome o;
  std::mt19937_64 rng(7007);
  auto rand_measure = [&] (std::size_t m) { return t::random_measure(rng, m); };
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = t::uniform(rng, 1, 10);
    const auto mu = rand_measure(m);
    const auto a = t::random_element(rng, m, false);
    const auto b = t::random_element(rng, m, false) - a;
    o.require(finmeas::evaluate(mu, a | b) == finmeas::evaluate(mu, a) + finmeas::evaluate(mu, b),
              "additivity case " + std::to_string(i));
  }
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = t::uniform(rng, 1, 10);
    const auto mu = rand_measure(m);
    const auto b = t::random_element(rng, m, false);
    const auto a = b & t::random_element(rng, m, false);
    o.require(finmeas::evaluate(mu, a) <= finmeas::evaluate(mu, b), "monotonicity case " + std::to_string(i));
  }
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = t::uniform(rng, 1, 10);
    const auto mu = rand_measure(m);
    const auto a = t::random_element(rng, m, false);
    const auto b = t::random_element(rng, m, false);
    const auto c = t::random_element(rng, m, false);
    o.require(finmeas::symdiff_metric(mu, a, c) <= finmeas::symdiff_metric(mu, a, b) + finmeas::symdiff_metric(mu, b, c),
              "triangle case " + std::to_string(i));
  }
  for (int i = 0; i < 1000; ++i) {
    const std::size_t m = t::uniform(rng, 1, 10);
    const std::size_t count = t::uniform(rng, 1, 4);
    std::vector<Measure> measures;
    std::vector<long> raw;
    long total = 0;
    for (std::size_t j = 0; j < count; ++j) {
      measures.push_back(rand_measure(m));
      raw.push_back(static_cast<long>(rng() % 5) + 1);
      total += raw.back();
    }
    std::vector<Rational> weights;
    for (const auto r : raw) {
      weights.emplace_back(r, total);
    }
    const auto mix = finmeas::weighted_sum(measures, weights);
    const auto a = t::random_element(rng, m, false);
    Rational expected;
    for (std::size_t j = 0; j < count; ++j) {
      expected += weights[j] * finmeas::evaluate(measures[j], a);
    }
    o.require(finmeas::evaluate(mix, a) == expected, "linearity case " + std::to_string(i));
  }
  o.detail = "1000 cases each: additivity, monotonicity, triangle inequality, weighted-sum linearity";
  return o;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (const char c : s) {
    out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  }
  return out + "'";
}

Outcome ac8_cli() {
  Outcome o;
  const fs::path fixtures{FINMEAS_FIXTURE_DIR};
  const fs::path scratch = fs::temp_directory_path() / ("finmeas_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(scratch);
  std::size_t runs = 0;
  for (const auto& c : t::cli_cases()) {
    std::string cmd = "cd " + shell_quote(fixtures.string()) + " && " + shell_quote(FINMEAS_CLI_PATH);
    for (const auto& arg : c.args) {
      cmd += " " + shell_quote(arg);
    }
    const auto out_path = scratch / "out";
    const auto err_path = scratch / "err";
    cmd += " >" + shell_quote(out_path.string()) + " 2>" + shell_quote(err_path.string());
    for (int repeat = 0; repeat < 2; ++repeat) {
      const int status = std::system(cmd.c_str());
      const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
      ++runs;
      o.require(code == c.exit_code, c.golden + ": exit " + std::to_string(code) + ", expected " +
                                         std::to_string(c.exit_code));
      const auto golden = slurp(fixtures / "expected" / (c.golden + ".out"));
      o.require(slurp(out_path) + slurp(err_path) == golden, c.golden + ": report differs from golden");
    }
  }
  fs::remove_all(scratch);
  o.detail = std::to_string(t::cli_cases().size()) + " fixture cases over all 10 commands, " +
             std::to_string(runs) + " process runs, exit codes and reports byte-stable";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"AC1", "Kelley duality on random families", 60, ac1_duality},
      {"AC2", "intersection number fixtures", 5, ac2_fixtures},
      {"AC3", "dyadic decompositions at depth 1..6", 30, ac3_dyadic},
      {"AC4", "strictly positive measures from pieces", 60, ac4_kelley},
      {"AC5", "approximability monotone in eps", 30, ac5_approximability},
      {"AC6", "min_pieces exactness", 120, ac6_min_pieces},
      {"AC7", "measure axioms", 30, ac7_measure_axioms},
      {"AC8", "CLI fixture matrix", 60, ac8_cli},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) {
      o.pass = false;
      o.failures.push_back("took " + std::to_string(seconds) + " s, budget " +
                           std::to_string(c.budget_seconds) + " s");
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f s", seconds);
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << ": " << o.detail << " ("
              << timing << ")\n";
    for (const auto& f : o.failures) {
      std::cout << "       " << f << "\n";
    }
    failed += o.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all acceptance criteria pass" : std::to_string(failed) + " criteria failed")
            << "\n";
  return failed == 0 ? 0 : 1;
}
