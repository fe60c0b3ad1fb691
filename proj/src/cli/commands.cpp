#include "finmeas/cli/commands.hpp"

#include <array>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include <CLI11.hpp>

#include "finmeas/decomposition_search.hpp"
#include "finmeas/errors.hpp"
#include "finmeas/intersection.hpp"
#include "finmeas/measure.hpp"
#include "finmeas/nonatomic.hpp"

namespace finmeas::cli {

namespace {

constexpr std::array<std::pair<std::string_view, Command>, 10> kCommands{{
    {"intnum", Command::IntNum},
    {"kelley-check", Command::KelleyCheck},
    {"kelley-build", Command::KelleyBuild},
    {"approx-check", Command::ApproxCheck},
    {"nonatomic-check", Command::NonatomicCheck},
    {"nonatomic-build", Command::NonatomicBuild},
    {"small-subset", Command::SmallSubset},
    {"linked", Command::Linked},
    {"min-pieces", Command::MinPieces},
    {"dyadic", Command::Dyadic},
}};

constexpr std::string_view kUsage =
    "usage: finmeas <command> <instance-file> [--oracle N] [--eps p/q] [--depth D] [--beta p/q] "
    "[--n N] [--decimal]\n"
    "commands: intnum kelley-check kelley-build approx-check nonatomic-check nonatomic-build\n"
    "          small-subset linked min-pieces dyadic\n";

class Printer {
 public:
  explicit Printer(bool decimal) : decimal_(decimal) {}

  std::string operator()(const Rational& r) const {
    return decimal_ ? r.str() + " (" + r.decimal() + ")" : r.str();
  }

  std::string operator()(const std::vector<Rational>& v) const {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      out += (i ? ", " : "") + (*this)(v[i]);
    }
    return out + "]";
  }

 private:
  bool decimal_;
};

std::string index_list(const std::vector<std::size_t>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += (i ? "," : "") + std::to_string(v[i]);
  }
  return out + "}";
}

struct Allowed {
  bool oracle = false, eps = false, depth = false, beta = false, n = false;
};

Allowed allowed_flags(Command command) {
  switch (command) {
    case Command::IntNum: return {.oracle = true};
    case Command::ApproxCheck: return {.eps = true};
    case Command::SmallSubset: return {.eps = true, .n = true};
    case Command::Linked: return {.n = true};
    case Command::MinPieces: return {.beta = true, .n = true};
    case Command::Dyadic: return {.depth = true};
    default: return {};
  }
}

void check_flags(Command command, const Options& options) {
  const Allowed allowed = allowed_flags(command);
  const std::string name(command_name(command));
  auto reject = [&](bool present, bool ok, const char* flag) {
    if (present && !ok) {
      throw InputError(std::string("flag ") + flag + " does not apply to " + name);
    }
  };
  reject(options.oracle.has_value(), allowed.oracle, "--oracle");
  reject(options.eps.has_value(), allowed.eps, "--eps");
  reject(options.depth.has_value(), allowed.depth, "--depth");
  reject(options.beta.has_value(), allowed.beta, "--beta");
  reject(options.n.has_value(), allowed.n, "--n");
}

template <typename T>
const T& require(const std::optional<T>& value, const char* flag, Command command) {
  if (!value) {
    throw InputError(std::string(command_name(command)) + " requires " + flag);
  }
  return *value;
}

std::vector<Family> pieces_of(const InstanceFile& instance) { return instance.all_families(); }

std::vector<LeveledDecomposition> decompositions_of(const InstanceFile& instance) {
  if (instance.decompositions.empty()) {
    throw InputError("instance defines no decompositions");
  }
  std::vector<LeveledDecomposition> out;
  for (const auto& d : instance.decompositions) {
    std::vector<Family> levels;
    for (const auto& name : d.levels) {
      levels.push_back(instance.to_family(instance.family(name)));
    }
    out.emplace_back(SetAlgebra::power_set(instance.atom_count), std::move(levels));
  }
  return out;
}

Report intnum(const InstanceFile& instance, const Options& options, const Printer& p) {
  Report report;
  std::ostringstream out;
  const auto families = pieces_of(instance);
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& family = families[f];
    const auto solved = int_exact(family);
    out << "family " << instance.families[f].name << ": " << family.size() << " members over "
        << family.atom_count() << " atoms\n";
    out << "  int = " << p(solved.value) << "\n";
    out << "  measure = " << p(solved.measure.weights()) << "\n";
    out << "  adversary = " << p(solved.adversary) << "\n";
    if (options.oracle) {
      const auto bound = int_bruteforce(family, *options.oracle);
      out << "  oracle (multisets of size <= " << *options.oracle
          << "): bound = " << p(bound.best_upper_bound)
          << ", witness = " << index_list(bound.witness) << "\n";
      if (bound.best_upper_bound < solved.value) {
        out << "  sandwich: VIOLATED (bound below int)\n";
        report.exit_code = kFails;
      } else if (bound.exact) {
        out << "  sandwich: closed (bound = int)\n";
      } else {
        out << "  sandwich: open (bound > int; raise --oracle to at least "
            << solved.value.denominator().get_str() << ")\n";
      }
    }
  }
  report.text = out.str();
  return report;
}

Report kelley_check_cmd(const InstanceFile& instance, const Printer& p) {
  const auto check = kelley_check(pieces_of(instance));
  std::ostringstream out;
  out << "kelley-check: " << check.values.size()
      << " pieces (a finite list standing in for a countable union)\n";
  for (std::size_t i = 0; i < check.values.size(); ++i) {
    out << "  piece " << instance.families[i].name << ": int = " << p(check.values[i]) << "\n";
  }
  out << (check.all_positive ? "all pieces have positive intersection number\n"
                             : "some piece has intersection number 0\n");
  return {check.all_positive ? kHolds : kFails, out.str()};
}

Report kelley_build_cmd(const InstanceFile& instance, const Printer& p) {
  const auto pieces = pieces_of(instance);
  const auto built = kelley_build_measure(pieces);
  std::ostringstream out;
  out << "kelley-build: " << pieces.size() << " pieces\n";
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    out << "  piece " << instance.families[i].name << ": weight = " << p(built.weights[i])
        << ", lower bound = " << p(built.lower_bounds[i]) << " (verified on "
        << pieces[i].size() << " members)\n";
  }
  out << "measure = " << p(built.measure.weights()) << "\n";

  std::vector<Element> generators;
  for (const auto& piece : pieces) {
    generators.insert(generators.end(), piece.begin(), piece.end());
  }
  const auto algebra = generate_subalgebra(instance.atom_count, generators);
  const auto elements = algebra.elements();
  std::size_t covered = 0;
  for (const auto& e : elements) {
    if (e.is_zero()) {
      continue;
    }
    const bool in_piece = std::any_of(pieces.begin(), pieces.end(),
                                      [&](const Family& f) { return f.find(e).has_value(); });
    covered += in_piece ? 1 : 0;
  }
  out << "generated algebra: " << elements.size() << " elements, " << atoms_of(algebra).size()
      << " atoms; pieces cover " << covered << " of " << elements.size() - 1
      << " nonzero elements\n";
  const auto positive = is_strictly_positive(built.measure, algebra);
  if (positive.holds) {
    out << "strictly positive on the generated algebra: yes\n";
    return {kHolds, out.str()};
  }
  out << "strictly positive on the generated algebra: no (witness " << positive.witness->bitstring()
      << ")\n";
  return {kFails, out.str()};
}

Report approx_check_cmd(const InstanceFile& instance, const Options& options, const Printer& p) {
  const Rational& eps = require(options.eps, "--eps", Command::ApproxCheck);
  const auto check = approximability_check(pieces_of(instance), eps);
  std::ostringstream out;
  out << "approx-check: threshold 1 - eps = " << p(Rational(1) - eps) << "\n";
  for (std::size_t i = 0; i < check.values.size(); ++i) {
    const bool ok = check.values[i] >= Rational(1) - eps;
    out << "  piece " << instance.families[i].name << ": int = " << p(check.values[i])
        << (ok ? " ok" : " FAIL") << "\n";
  }
  out << (check.ok ? "every piece meets the threshold\n" : "some piece falls below the threshold\n");
  return {check.ok ? kHolds : kFails, out.str()};
}

void describe_verification(std::ostream& out, const LeveledDecomposition& dec, const Printer& p) {
  const auto& v = *dec.verification();
  out << "  (i) nesting: ";
  if (v.nesting.holds) {
    out << "ok\n";
  } else {
    const auto [n, j] = *v.nesting.violation;
    out << "FAIL at level " << n << " member " << j << " (" << dec.level(n)[j].bitstring()
        << ")\n";
  }
  out << "  (ii) intersection bounds:\n";
  for (const auto& b : v.bounds) {
    out << "    level " << b.level << ": int = " << p(b.value) << (b.ok ? " >= " : " < ")
        << p(b.required) << (b.ok ? " ok" : " FAIL") << "\n";
  }
  out << "  (iii) splitting: ";
  if (v.splitting.holds) {
    out << "ok (" << v.splitting.entries.size() << " members split)\n";
  } else {
    out << "FAIL\n";
    for (const auto& e : v.splitting.entries) {
      if (!e.witness) {
        out << "    level " << e.level << " member " << e.member << " ("
            << dec.level(e.level)[e.member].bitstring() << ") has no disjoint pair below it\n";
      }
    }
  }
  if (v.verified_through) {
    out << "  verified through depth " << *v.verified_through << "\n";
  } else {
    out << "  no level verified\n";
  }
}

bool fully_verified(const LeveledDecomposition& dec) {
  return dec.verified_through() && *dec.verified_through() == dec.depth();
}

void describe_header(std::ostream& out, const NamedDecomposition& named,
                     const LeveledDecomposition& dec) {
  out << "decomposition " << named.name << ": levels 0.." << dec.depth() << " over "
      << dec.ambient().atom_count()
      << " atoms (finite truncation; a finite algebra always has atoms)\n";
}

Report nonatomic_check_cmd(const InstanceFile& instance, const Printer& p) {
  std::ostringstream out;
  int code = kHolds;
  const auto decs = decompositions_of(instance);
  for (std::size_t d = 0; d < decs.size(); ++d) {
    const auto dec = verify_decomposition(decs[d]);
    describe_header(out, instance.decompositions[d], dec);
    describe_verification(out, dec, p);
    if (!fully_verified(dec)) {
      code = kFails;
    }
  }
  return {code, out.str()};
}

Report nonatomic_build_cmd(const InstanceFile& instance, const Printer& p) {
  std::ostringstream out;
  int code = kHolds;
  const auto decs = decompositions_of(instance);
  for (std::size_t d = 0; d < decs.size(); ++d) {
    const auto dec = verify_decomposition(decs[d]);
    describe_header(out, instance.decompositions[d], dec);
    if (!fully_verified(dec)) {
      out << "  conditions fail: " << dec.verification()->failure << "\n  no measure built\n";
      code = kFails;
      continue;
    }
    const auto cluster = cluster_measure(dec);
    out << "  measure (deepest level) = " << p(cluster.measure.weights()) << "\n";
    for (std::size_t n = 0; n <= dec.depth(); ++n) {
      std::optional<Rational> lightest;
      std::size_t members = 0;
      for (const auto& c : cluster.certificates) {
        if (c.level == n) {
          lightest = lightest ? std::min(*lightest, c.measure) : c.measure;
          ++members;
        }
      }
      out << "  level " << n << ": " << members << " members certified, min measure "
          << p(*lightest) << " >= " << p(Rational::pow2(-static_cast<long>(n))) << " via "
          << (std::size_t{1} << (dec.depth() - n)) << " disjoint pieces each\n";
    }
  }
  return {code, out.str()};
}

Report small_subset_cmd(const InstanceFile& instance, const Options& options, const Printer& p) {
  const Rational& eps = require(options.eps, "--eps", Command::SmallSubset);
  if (eps.sign() <= 0) {
    throw InputError("--eps must be positive");
  }
  const std::size_t level = options.n.value_or(0);
  std::ostringstream out;
  int code = kHolds;
  const auto decs = decompositions_of(instance);
  for (std::size_t d = 0; d < decs.size(); ++d) {
    const auto dec = verify_decomposition(decs[d]);
    describe_header(out, instance.decompositions[d], dec);
    if (level > dec.depth()) {
      throw InputError("--n " + std::to_string(level) + " exceeds depth " +
                       std::to_string(dec.depth()));
    }
    if (!fully_verified(dec)) {
      out << "  conditions fail: " << dec.verification()->failure << "\n";
      code = kFails;
      continue;
    }
    const auto cluster = cluster_measure(dec);
    const auto& members = dec.level(level);
    for (std::size_t j = 0; j < members.size(); ++j) {
      out << "  level " << level << " member " << j << " (" << members[j].bitstring() << "): ";
      try {
        const auto found = small_positive_subset(dec, cluster.measure, members[j], level, eps);
        out << "subset " << found.subset.bitstring() << " at level " << found.refinement_level
            << ", measure " << p(found.measure) << " <= " << p(found.bound) << " < " << p(eps)
            << "\n";
      } catch (const DepthInsufficient& e) {
        out << "FAIL, needs depth " << e.needed_depth() << "\n";
        code = kFails;
      }
    }
  }
  return {code, out.str()};
}

Report linked_cmd(const InstanceFile& instance, const Options& options, const Printer& p) {
  const std::size_t n_max = require(options.n, "--n", Command::Linked);
  const auto families = pieces_of(instance);
  std::ostringstream out;
  int code = kHolds;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto& family = families[f];
    out << "family " << instance.families[f].name << ":\n";
    for (const auto& row : linked_vs_int_report(family, n_max)) {
      out << "  n = " << row.n << ": " << (row.linked ? "linked" : "not linked")
          << ", int = " << p(row.intersection_number) << "\n";
    }
    const auto centered = is_centered(family);
    out << "  centered: "
        << (centered.holds ? "yes (common atom " + std::to_string(*centered.common_atom) + ")"
                           : std::string("no"))
        << "\n";
    const auto linked = is_n_linked(family, n_max);
    if (!linked.holds) {
      out << "  not " << n_max << "-linked: members " << index_list(linked.violating_subset)
          << " have empty intersection\n";
      code = kFails;
    }
  }
  return {code, out.str()};
}

Report min_pieces_cmd(const InstanceFile& instance, const Options& options, const Printer& p) {
  if (options.n && options.beta) {
    throw InputError("min-pieces takes at most one of --n and --beta");
  }
  PieceCriterion criterion = Centered{};
  std::string label = "centered";
  if (options.n) {
    criterion = NLinked{*options.n};
    label = std::to_string(*options.n) + "-linked";
  } else if (options.beta) {
    criterion = IntAtLeast{*options.beta};
    label = "int >= " + p(*options.beta);
  }
  const auto families = pieces_of(instance);
  std::ostringstream out;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto result = min_pieces(families[f], criterion);
    out << "family " << instance.families[f].name << ": " << result.count << " " << label
        << " pieces (lower bound " << result.lower_bound
        << "; minimum over finite partitions)\n";
    for (const auto& piece : result.pieces) {
      out << "  " << index_list(piece) << "\n";
    }
  }
  return {kHolds, out.str()};
}

Report dyadic_cmd(const Options& options) {
  const std::size_t depth = require(options.depth, "--depth", Command::Dyadic);
  const auto dec = dyadic_decomposition(depth);
  InstanceFile instance;
  instance.atom_count = dec.ambient().atom_count();
  NamedDecomposition named{"dyadic", {}, 0};
  for (std::size_t n = 0; n <= dec.depth(); ++n) {
    NamedFamily family{"level" + std::to_string(n), dec.level(n).members(), 0};
    named.levels.push_back(family.name);
    instance.families.push_back(std::move(family));
  }
  instance.decompositions.push_back(std::move(named));
  return {kHolds, serialize_text(instance)};
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (const auto& [n, c] : kCommands) {
    if (n == name) {
      return c;
    }
  }
  return std::nullopt;
}

std::string_view command_name(Command command) {
  for (const auto& [n, c] : kCommands) {
    if (c == command) {
      return n;
    }
  }
  return "?";
}

Report run_command(Command command, const InstanceFile& instance, const Options& options) {
  const Printer p(options.decimal);
  try {
    check_flags(command, options);
    switch (command) {
      case Command::IntNum: return intnum(instance, options, p);
      case Command::KelleyCheck: return kelley_check_cmd(instance, p);
      case Command::KelleyBuild: return kelley_build_cmd(instance, p);
      case Command::ApproxCheck: return approx_check_cmd(instance, options, p);
      case Command::NonatomicCheck: return nonatomic_check_cmd(instance, p);
      case Command::NonatomicBuild: return nonatomic_build_cmd(instance, p);
      case Command::SmallSubset: return small_subset_cmd(instance, options, p);
      case Command::Linked: return linked_cmd(instance, options, p);
      case Command::MinPieces: return min_pieces_cmd(instance, options, p);
      case Command::Dyadic: return dyadic_cmd(options);
    }
  } catch (const InputError& e) {
    return {kInputError, std::string("error: ") + e.what() + "\n"};
  } catch (const DecompositionFailure& e) {
    return {kFails, std::string("failure: ") + e.what() + "\n"};
  }
  return {kInputError, "error: unhandled command\n"};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact intersection numbers and measures on finite set algebras", "finmeas"};
  std::string command_text;
  std::string instance_path;
  std::optional<std::size_t> oracle, depth, n;
  std::string eps_text, beta_text;
  bool decimal = false;
  app.add_option("command", command_text, "Command to run")->required();
  app.add_option("instance", instance_path, "Instance file (.json for JSON, text otherwise)");
  app.add_option("--oracle", oracle, "Also run the multiset oracle up to size N");
  app.add_option("--eps", eps_text, "Rational eps as p/q");
  app.add_option("--depth", depth, "Dyadic depth");
  app.add_option("--beta", beta_text, "Intersection-number threshold p/q");
  app.add_option("--n", n, "Linkedness parameter or level");
  app.add_flag("--decimal", decimal, "Append decimal approximations");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help() << kUsage;
    return kHolds;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << kUsage;
    return kInputError;
  }

  const auto command = parse_command(command_text);
  if (!command) {
    err << "error: unknown command '" << command_text << "'\n" << kUsage;
    return kInputError;
  }

  Options options;
  options.oracle = oracle;
  options.depth = depth;
  options.n = n;
  options.decimal = decimal;
  try {
    if (app.count("--eps")) {
      options.eps = Rational::parse(eps_text);
    }
    if (app.count("--beta")) {
      options.beta = Rational::parse(beta_text);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  InstanceFile instance;
  if (*command == Command::Dyadic) {
    Report report = run_command(*command, instance, options);
    if (report.exit_code != kHolds || instance_path.empty() || instance_path == "-") {
      (report.exit_code == kInputError ? err : out) << report.text;
      return report.exit_code;
    }
    std::ofstream file(instance_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << instance_path << "'\n";
      return kInputError;
    }
    const std::string_view path = instance_path;
    file << (path.ends_with(".json") ? serialize_json(parse_instance(report.text)) : report.text);
    out << "wrote dyadic decomposition of depth " << *options.depth << " to " << instance_path
        << "\n";
    return kHolds;
  }

  if (instance_path.empty()) {
    err << "error: " << command_text << " needs an instance file\n" << kUsage;
    return kInputError;
  }
  try {
    instance = load_instance(instance_path);
  } catch (const InputError& e) {
    err << "error: " << instance_path << ": " << e.what() << "\n";
    return kInputError;
  }
  const Report report = run_command(*command, instance, options);
  (report.exit_code == kInputError ? err : out) << report.text;
  return report.exit_code;
}

}  // namespace finmeas::cli
