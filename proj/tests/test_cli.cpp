#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "finmeas/cli/commands.hpp"
#include "finmeas/cli/instance.hpp"
#include "support/cli_cases.hpp"

namespace fs = std::filesystem;
using finmeas::cli::Command;

namespace {

const fs::path kFixtures{FINMEAS_FIXTURE_DIR};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

struct Outcome {
  int exit_code;
  std::string output;
};

Outcome run_in_fixtures(const std::vector<std::string>& args) {
  const auto saved = fs::current_path();
  fs::current_path(kFixtures);
  std::ostringstream out;
  std::ostringstream err;
  const int code = finmeas::cli::run(args, out, err);
  fs::current_path(saved);
  return {code, out.str() + err.str()};
}

}  // namespace

TEST_CASE("command names round trip") {
  for (const auto* name : {"intnum", "kelley-check", "kelley-build", "approx-check", "nonatomic-check",
                           "nonatomic-build", "small-subset", "linked", "min-pieces", "dyadic"}) {
    const auto cmd = finmeas::cli::parse_command(name);
    REQUIRE(cmd.has_value());
    CHECK(finmeas::cli::command_name(*cmd) == name);
  }
  CHECK_FALSE(finmeas::cli::parse_command("intnumber").has_value());
}

TEST_CASE("fixture matrix matches golden reports and exit codes") {
  const bool update = std::getenv("FINMEAS_UPDATE_GOLDEN") != nullptr;
  for (const auto& c : finmeas::testing::cli_cases()) {
    CAPTURE(c.golden);
    const auto outcome = run_in_fixtures(c.args);
    CHECK(outcome.exit_code == c.exit_code);
    const auto golden = kFixtures / "expected" / (c.golden + ".out");
    if (update) {
      std::ofstream(golden, std::ios::binary) << outcome.output;
    }
    REQUIRE(fs::exists(golden));
    CHECK(outcome.output == read_file(golden));
    // Reports are deterministic.
    CHECK(run_in_fixtures(c.args).output == outcome.output);
  }
}

TEST_CASE("every command appears in the matrix") {
  for (const auto* name : {"intnum", "kelley-check", "kelley-build", "approx-check", "nonatomic-check",
                           "nonatomic-build", "small-subset", "linked", "min-pieces", "dyadic"}) {
    bool seen = false;
    for (const auto& c : finmeas::testing::cli_cases()) {
      seen = seen || c.args.front() == name;
    }
    CHECK_MESSAGE(seen, name);
  }
}

TEST_CASE("run_command on a loaded instance") {
  const auto inst = finmeas::cli::load_instance(kFixtures / "fano.txt");
  const auto report = finmeas::cli::run_command(Command::IntNum, inst, {});
  CHECK(report.exit_code == finmeas::cli::kHolds);
  CHECK(report.text.find("int = 3/7") != std::string::npos);
  finmeas::cli::Options eps;
  eps.eps = finmeas::Rational(4, 7);
  CHECK(finmeas::cli::run_command(Command::ApproxCheck, inst, eps).exit_code == finmeas::cli::kHolds);
  eps.eps = finmeas::Rational(1, 2);
  CHECK(finmeas::cli::run_command(Command::ApproxCheck, inst, eps).exit_code == finmeas::cli::kFails);
}

TEST_CASE("rationals are never printed as bare decimals") {
  const auto out = run_in_fixtures({"intnum", "fano.txt"}).output;
  CHECK(out.find("0.") == std::string::npos);
}

TEST_CASE("dyadic writes an instance file that loads back") {
  const auto dir = fs::temp_directory_path() / "finmeas_cli_test";
  fs::create_directories(dir);
  for (const auto* name : {"d2.txt", "d2.json"}) {
    const auto path = dir / name;
    std::ostringstream out;
    std::ostringstream err;
    CHECK(finmeas::cli::run({"dyadic", path.string(), "--depth", "2"}, out, err) == 0);
    const auto inst = finmeas::cli::load_instance(path);
    CHECK(inst.atom_count == 4);
    REQUIRE(inst.decompositions.size() == 1);
    CHECK(inst.decompositions[0].levels.size() == 3);
    std::ostringstream check_out;
    CHECK(finmeas::cli::run({"nonatomic-check", path.string()}, check_out, err) == 0);
  }
  fs::remove_all(dir);
}
