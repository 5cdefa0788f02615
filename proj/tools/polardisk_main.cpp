#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "polardisk/commands.hpp"

using namespace polardisk;

namespace {

struct Overrides {
  std::string problem;
  std::optional<int> m, K;
  std::optional<double> T, a, p, q, l;
  std::string radial_kind, angular_kind, temporal_kind, step_policy, solver, dump_matrix;
  bool error_field = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--problem", o.problem, "registered problem name");
  cmd->add_option("-m", o.m, "radial interior nodes");
  cmd->add_option("-K", o.K, "time steps");
  cmd->add_option("-T", o.T, "final time");
  cmd->add_option("-a", o.a, "weight on the old time level");
  cmd->add_option("-p", o.p, "radial exponent");
  cmd->add_option("-q", o.q, "angular exponent");
  cmd->add_option("-l", o.l, "temporal exponent");
  cmd->add_option("--radial", o.radial_kind, "sine_power | legacy_power | identity");
  cmd->add_option("--angular", o.angular_kind, "sine_power | identity");
  cmd->add_option("--temporal", o.temporal_kind, "sine_power | identity");
  cmd->add_option("--step-policy", o.step_policy, "fixed | h | h2");
  cmd->add_option("--solver", o.solver, "direct | iterative");
  cmd->add_option("--dump-matrix", o.dump_matrix, "write the operator in Matrix Market format");
  cmd->add_flag("--error-field", o.error_field, "write the error field CSV");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunConfig apply(RunConfig c, const Overrides& o, std::optional<std::uint64_t> seed) {
  if (!o.problem.empty()) c.problem = o.problem;
  if (o.m) c.m = *o.m;
  if (o.K) c.K = *o.K;
  if (o.T) c.T = *o.T;
  if (o.a) c.a = *o.a;
  if (o.p) c.radial.exponent = *o.p;
  if (o.q) c.angular.exponent = *o.q;
  if (o.l) c.temporal.exponent = *o.l;
  try {
    if (!o.radial_kind.empty()) c.radial.kind = stretch_kind_from_string(o.radial_kind);
    if (!o.angular_kind.empty()) c.angular.kind = stretch_kind_from_string(o.angular_kind);
    if (!o.temporal_kind.empty()) c.temporal.kind = stretch_kind_from_string(o.temporal_kind);
    if (!o.step_policy.empty()) c.step_policy = step_policy_from_string(o.step_policy);
    if (!o.solver.empty()) c.solver = solver_kind_from_string(o.solver);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("flag", e.what());
  }
  if (!o.dump_matrix.empty()) c.dump_matrix = o.dump_matrix;
  if (o.error_field) c.error_field = true;
  if (seed) c.seed = *seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-difference solver for parabolic and continuity equations on the unit disk"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  bool wall_time = false;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--workers", workers, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "seed for sampled checks");
  app.add_flag("--wall-time", wall_time, "include wall-clock columns in CSV output");

  Overrides ov;
  auto* run = app.add_subcommand("run", "single march with error report");
  add_overrides(run, ov);
  auto* sweep = app.add_subcommand("sweep", "cartesian parameter sweep from the config's sweep block");
  add_overrides(sweep, ov);
  std::vector<double> sweep_a, sweep_p, sweep_q, sweep_l;
  std::vector<int> sweep_m, sweep_K;
  sweep->add_option("--sweep-m", sweep_m, "values of m")->delimiter(',');
  sweep->add_option("--sweep-K", sweep_K, "values of K")->delimiter(',');
  sweep->add_option("--sweep-a", sweep_a, "values of a")->delimiter(',');
  sweep->add_option("--sweep-p", sweep_p, "values of p")->delimiter(',');
  sweep->add_option("--sweep-q", sweep_q, "values of q")->delimiter(',');
  sweep->add_option("--sweep-l", sweep_l, "values of l")->delimiter(',');

  auto* tables = app.add_subcommand("tables", "replicate a published table layout");
  std::string table_id;
  std::vector<int> table_ms;
  std::optional<double> table_dt;
  tables->add_option("which", table_id, "2.1 | 2.2 | 3.1 | 3.2")->required();
  tables->add_option("--ms", table_ms, "values of m (default 19 39 59 79 99)")->delimiter(',');
  tables->add_option("--dt", table_dt, "table 2.1: fixed time step instead of dt = h");

  auto* check = app.add_subcommand("check", "pre-flight consistency checks");
  std::string inject;
  check->add_option("--inject", inject, "sign-flip | source-typo")
      ->check(CLI::IsMember({"sign-flip", "source-typo"}));

  auto* conv = app.add_subcommand("convergence", "empirical order over m or K");
  add_overrides(conv, ov);
  std::string vary;
  std::vector<int> values;
  conv->add_option("--vary", vary, "m | K")->check(CLI::IsMember({"m", "K"}));
  conv->add_option("--values", values, "values of the varied parameter")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  CommandContext ctx;
  ctx.workers = workers;
  ctx.out_dir = out_dir;
  ctx.wall_time = wall_time;

  try {
    const std::string text = config_path.empty() ? std::string() : read_text(config_path);
    const RunConfig base = apply(text.empty() ? RunConfig{} : config_from_json(text), ov, seed);
    if (*run) return command_run(base, ctx);
    if (*sweep) {
      SweepAxes axes = text.empty() ? SweepAxes{} : sweep_axes_from_json(text);
      if (!sweep_m.empty()) axes.m = sweep_m;
      if (!sweep_K.empty()) axes.K = sweep_K;
      if (!sweep_a.empty()) axes.a = sweep_a;
      if (!sweep_p.empty()) axes.p = sweep_p;
      if (!sweep_q.empty()) axes.q = sweep_q;
      if (!sweep_l.empty()) axes.l = sweep_l;
      return command_sweep(base, axes, ctx);
    }
    if (*tables) {
      TableOptions opt;
      if (!table_ms.empty()) opt.ms = table_ms;
      opt.dt = table_dt;
      return command_tables(table_layout_from_string(table_id), opt, ctx);
    }
    if (*check) {
      const CheckFault fault = inject == "sign-flip"     ? CheckFault::stencil_sign_flip
                               : inject == "source-typo" ? CheckFault::source_typo
                                                         : CheckFault::none;
      return command_check(ctx, fault, seed.value_or(1));
    }
    if (*conv) {
      ConvergencePlan plan = text.empty() ? ConvergencePlan{} : convergence_plan_from_json(text);
      if (vary == "m") plan.vary = ConvergencePlan::Vary::m;
      if (vary == "K") plan.vary = ConvergencePlan::Vary::K;
      if (!values.empty()) plan.values = values;
      return command_convergence(base, plan, ctx);
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitOk;
}
