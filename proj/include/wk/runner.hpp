#pragma once

#include "wk/config.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace wk {

enum class Command { CheckFamily, Seminorm, Equivalence, Nuclearity, KernelDiff, KernelDecompose, ReportAll };

Command command_from_string(const std::string& name);
const char* to_string(Command c);
/// Whether a check of the given type belongs to the command.
bool command_selects(Command c, const std::string& check_type);

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // else the config's "output", else ./reports
  std::optional<double> tol;  // overrides every tolerance in the config
  bool emit_certificate = false;
  bool quiet = false;
};

struct CheckOutcome {
  std::string name;
  std::string type;
  bool pass;
  std::string summary;
};

struct RunResult {
  int exit_code;  // 0 all pass, 1 some check failed, 2 usage, config or I/O error
  std::vector<CheckOutcome> outcomes;
  std::string error;
};

/// Runs the checks the command selects, writes one JSON report per check (plus
/// CSV tables and certificates) and an index.json with content hashes.
RunResult run(Command command, const RunConfig& config, const RunOptions& options, std::ostream& out);

}  // namespace wk
