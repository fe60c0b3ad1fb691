#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finmeas/cli/instance.hpp"
#include "finmeas/rational.hpp"

namespace finmeas::cli {

enum class Command {
  IntNum,
  KelleyCheck,
  KelleyBuild,
  ApproxCheck,
  NonatomicCheck,
  NonatomicBuild,
  SmallSubset,
  Linked,
  MinPieces,
  Dyadic,
};

std::optional<Command> parse_command(std::string_view name);
std::string_view command_name(Command command);

struct Options {
  std::optional<std::size_t> oracle;
  std::optional<Rational> eps;
  std::optional<std::size_t> depth;
  std::optional<Rational> beta;
  std::optional<std::size_t> n;
  bool decimal = false;
};

/// Exit statuses.
inline constexpr int kHolds = 0;
inline constexpr int kFails = 1;
inline constexpr int kInputError = 2;

struct Report {
  int exit_code = kHolds;
  std::string text;
};

/// Runs one command on a loaded instance. Input errors become exit status 2
/// with the diagnostic as report text. `dyadic` ignores the instance.
Report run_command(Command command, const InstanceFile& instance, const Options& options);

/// Full command line: `finmeas <command> <instance-file> [flags]`. Returns the
/// process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace finmeas::cli
