#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polardisk/analysis.hpp"

namespace polardisk {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitSolver = 3, kExitCheck = 4 };

struct CommandContext {
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  int workers = 1;
  std::string out_dir;  // empty keeps the config value
  bool wall_time = false;
};

int command_run(const RunConfig& cfg, const CommandContext& ctx);
int command_sweep(const RunConfig& base, const SweepAxes& axes, const CommandContext& ctx);
int command_tables(TableLayout which, const TableOptions& options, const CommandContext& ctx);

struct ConvergencePlan {
  enum class Vary { m, K } vary = Vary::m;
  std::vector<int> values{19, 39, 59, 79, 99};
  bool use_mean = false;
};

ConvergencePlan convergence_plan_from_json(const std::string& text);
int command_convergence(const RunConfig& base, const ConvergencePlan& plan, const CommandContext& ctx);

/// Faults injected into the check suite to prove that it can fail.
enum class CheckFault { none, stencil_sign_flip, source_typo };

struct CheckLine {
  std::string module;
  std::string name;
  bool pass = false;
  bool informational = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
};

std::vector<CheckLine> run_checks(CheckFault fault = CheckFault::none, std::uint64_t seed = 1);
int command_check(const CommandContext& ctx, CheckFault fault = CheckFault::none,
                  std::uint64_t seed = 1);

}  // namespace polardisk
