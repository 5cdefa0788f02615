#include "polardisk/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "polardisk/reference.hpp"

namespace polardisk {

namespace fs = std::filesystem;

namespace {

std::ostream& out_of(const CommandContext& c) { return c.out ? *c.out : std::cout; }
std::ostream& err_of(const CommandContext& c) { return c.err ? *c.err : std::cerr; }

std::string compact(const RunConfig& cfg) { return config_to_json(cfg, -1); }

fs::path prepare_dir(const std::string& dir) {
  fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << text;
}

std::string fmt(double v) { return format_number(v); }

std::string stem_of(const RunConfig& c) {
  return c.label.empty() ? c.problem + "_m" + std::to_string(c.m) : c.label;
}

}  // namespace

int command_run(const RunConfig& cfg_in, const CommandContext& ctx) {
  RunConfig cfg = cfg_in;
  if (!ctx.out_dir.empty()) cfg.out_dir = ctx.out_dir;
  try {
    cfg.validate();
    const RunOutcome run = execute_run(cfg);
    const fs::path dir = prepare_dir(cfg.out_dir);
    const std::string stem = stem_of(cfg);

    std::string doc = "# config: " + compact(cfg) + "\n";
    doc += emit_table({run.row}, TableLayout::generic, ctx.wall_time);
    write_file(dir / ("run_" + stem + ".csv"), doc);
    if (cfg.error_field) {
      std::ofstream f(dir / ("run_" + stem + "_error_field.csv"));
      f << "# config: " << compact(cfg) << "\n";
      write_error_field(f, run.report, run.grid);
    }
    if (!cfg.dump_matrix.empty()) {
      const ProblemSpec problem = make_problem(cfg.problem);
      const SparseOperator op = assemble_operator(run.grid, problem.family, problem.coefficients);
      write_matrix_market(cfg.dump_matrix, op.matrix);
    }
    const SweepRow& r = run.row;
    out_of(ctx) << "problem=" << cfg.problem << " m=" << cfg.m << " n=" << r.n << " K=" << r.K
                << " a=" << r.a << " maxerr=" << fmt(r.maxerr) << " meanerr=" << fmt(r.meanerr)
                << " maxerr_off_origin=" << fmt(r.maxerr_off_origin)
                << " wall_time=" << fmt(r.wall_time) << "s\n";
    return kExitOk;
  } catch (const ConfigError& e) {
    err_of(ctx) << e.what() << "\n";
    return kExitConfig;
  } catch (const SolverError& e) {
    err_of(ctx) << "solver failure: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::domain_error& e) {
    err_of(ctx) << "config: " << e.what() << "\n";
    return kExitConfig;
  }
}

int command_sweep(const RunConfig& base_in, const SweepAxes& axes, const CommandContext& ctx) {
  RunConfig base = base_in;
  if (!ctx.out_dir.empty()) base.out_dir = ctx.out_dir;
  std::vector<RunConfig> plan;
  try {
    plan = expand_sweep(base, axes);
  } catch (const ConfigError& e) {
    err_of(ctx) << e.what() << "\n";
    return kExitConfig;
  }
  const auto rows = run_sweep(plan, ctx.workers);
  const fs::path dir = prepare_dir(base.out_dir);
  std::string doc = "# config: " + compact(base) + "\n";
  doc += emit_table(rows, TableLayout::generic, ctx.wall_time);
  const fs::path path = dir / "sweep.csv";
  write_file(path, doc);
  int failed = 0;
  for (const auto& r : rows)
    if (!r.ok()) {
      ++failed;
      err_of(ctx) << "row " << r.index << " failed: " << r.error << "\n";
    }
  out_of(ctx) << "sweep: " << rows.size() << " rows, " << failed << " failed -> " << path.string()
              << "\n";
  return failed ? kExitSolver : kExitOk;
}

int command_tables(TableLayout which, const TableOptions& options, const CommandContext& ctx) {
  const auto plan = table_plan(which, options);
  const auto rows = run_sweep(plan, ctx.workers);
  std::string doc = "# table " + to_string(which) + ": " + compact(plan.front()) + "\n";
  if (which == TableLayout::table_2_1)
    doc += options.dt ? "# dt fixed at " + fmt(*options.dt) + "\n"
                      : "# dt = T/K with K = round(T/h), h = 1/(m+1)\n";
  doc += emit_table(rows, which, ctx.wall_time);
  const fs::path dir = prepare_dir(ctx.out_dir);
  std::string id = to_string(which);
  std::replace(id.begin(), id.end(), '.', '_');
  write_file(dir / ("table_" + id + ".csv"), doc);
  out_of(ctx) << doc;
  for (const auto& r : rows)
    if (!r.ok()) {
      err_of(ctx) << r.config.label << " m=" << r.config.m << " failed: " << r.error << "\n";
      return kExitSolver;
    }
  return kExitOk;
}

ConvergencePlan convergence_plan_from_json(const std::string& text) {
  ConvergencePlan plan;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text, nullptr, true, true);
  } catch (const nlohmann::json::parse_error&) {
    throw ConfigError("document", "malformed JSON");
  }
  if (!j.is_object() || !j.contains("convergence")) return plan;
  const auto& c = j.at("convergence");
  try {
    if (c.contains("vary")) {
      const std::string v = c.at("vary").get<std::string>();
      if (v == "m")
        plan.vary = ConvergencePlan::Vary::m;
      else if (v == "K")
        plan.vary = ConvergencePlan::Vary::K;
      else
        throw ConfigError("convergence.vary", "must be m or K");
    }
    if (c.contains("values")) plan.values = c.at("values").get<std::vector<int>>();
    if (c.contains("metric")) plan.use_mean = c.at("metric").get<std::string>() == "meanerr";
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("convergence", "has the wrong type");
  }
  if (plan.values.size() < 2) throw ConfigError("convergence.values", "needs at least two values");
  return plan;
}

int command_convergence(const RunConfig& base_in, const ConvergencePlan& plan,
                        const CommandContext& ctx) {
  RunConfig base = base_in;
  if (!ctx.out_dir.empty()) base.out_dir = ctx.out_dir;
  std::vector<RunConfig> configs;
  for (int v : plan.values) {
    RunConfig c = base;
    if (plan.vary == ConvergencePlan::Vary::m)
      c.m = v;
    else {
      c.K = v;
      c.step_policy = StepPolicy::fixed;
    }
    configs.push_back(c);
  }
  try {
    for (const auto& c : configs) c.validate();
  } catch (const ConfigError& e) {
    err_of(ctx) << e.what() << "\n";
    return kExitConfig;
  }
  const auto rows = run_sweep(configs, ctx.workers);
  std::vector<std::pair<double, double>> pairs;
  std::string doc = "# config: " + compact(base) + "\n";
  doc += plan.vary == ConvergencePlan::Vary::m ? "m,h,K,maxerr,meanerr\n" : "K,dt,m,maxerr,meanerr\n";
  for (const auto& r : rows) {
    if (!r.ok()) {
      err_of(ctx) << "run failed: " << r.error << "\n";
      return kExitSolver;
    }
    const double x = plan.vary == ConvergencePlan::Vary::m ? 1.0 / (r.config.m + 1) : r.dt;
    pairs.emplace_back(x, plan.use_mean ? r.meanerr : r.maxerr);
    if (plan.vary == ConvergencePlan::Vary::m)
      doc += std::to_string(r.config.m) + "," + fmt(x) + "," + std::to_string(r.K);
    else
      doc += std::to_string(r.K) + "," + fmt(x) + "," + std::to_string(r.config.m);
    doc += "," + fmt(r.maxerr) + "," + fmt(r.meanerr) + "\n";
  }
  const double order = convergence_order(pairs);
  doc += "# order " + fmt(order) + "\n";
  const fs::path dir = prepare_dir(base.out_dir);
  write_file(dir / "convergence.csv", doc);
  out_of(ctx) << doc;
  return kExitOk;
}

namespace {

double max_dense_gap(const SparseOperator& op, const DenseOperator& ref) {
  const Eigen::MatrixXd S = Eigen::MatrixXd(op.matrix);
  double scale = 1.0;
  for (Eigen::Index k = 0; k < ref.matrix.size(); ++k)
    scale = std::max(scale, std::abs(ref.matrix.data()[k]));
  double gap = (S - ref.matrix).cwiseAbs().maxCoeff();
  for (int j = 0; j < op.n; ++j) gap = std::max(gap, std::abs(op.boundary_weight[j] - ref.boundary_weight[j]));
  return gap / scale;
}

std::string rows_to_string(const std::vector<std::size_t>& rows) {
  std::string s;
  for (std::size_t k = 0; k < rows.size() && k < 8; ++k) s += (k ? " " : "") + std::to_string(rows[k]);
  if (rows.size() > 8) s += " ...";
  return s;
}

}  // namespace

std::vector<CheckLine> run_checks(CheckFault fault, std::uint64_t seed) {
  std::vector<CheckLine> lines;
  constexpr double kResidualLimit = 1e-8;

  for (const char* name : {"P1", "P2", "C1", "C2", "P2-printed", "C1-printed", "C2-printed"}) {
    ProblemSpec p = make_problem(name);
    const bool info = std::string(name).find("printed") != std::string::npos;
    if (fault == CheckFault::source_typo && p.name == "P1") {
      const SpaceTimeFn full = p.source;
      p.source = [full](double t, double r, double th) {
        return full(t, r, th) + 4.0 * std::exp(-t);  // drops the -4e^{-t} term
      };
    }
    const ResidualReport rep = residual_oracle(p, 20, seed);
    char detail[160];
    std::snprintf(detail, sizeof(detail), "worst at t=%.4g r=%.4g theta=%.4g; %s", rep.worst_t,
                  rep.worst_r, rep.worst_theta, rep.notes.c_str());
    lines.push_back({"problems", std::string("residual ") + name, rep.max_abs_residual <= kResidualLimit,
                     info, rep.max_abs_residual, kResidualLimit, detail});
  }
  for (const auto& name : problem_names()) {
    const double d = compatibility_defect(make_problem(name), 64, seed);
    lines.push_back({"problems", "compatibility " + name, d <= 1e-12, false, d, 1e-12, ""});
  }

  {
    const auto uni = StretchSpec::angular(StretchKind::identity);
    const auto rad = StretchSpec::radial(StretchKind::sine_power, 1.0);
    const PolarGrid g = build_polar_grid(2, 4, rad, uni);
    const PolarGrid gq = build_polar_grid(2, 4, rad, StretchSpec::angular(StretchKind::sine_power, 1.9));
    struct Case {
      const char* name;
      const PolarGrid* grid;
      ProblemSpec p;
    };
    for (const auto& c : {Case{"dense oracle P1 N=9", &g, experiment_P1()},
                          Case{"dense oracle P2 N=9", &g, experiment_P2()},
                          Case{"dense oracle C1 N=9", &gq, experiment_C1()}}) {
      const auto op = assemble_operator(*c.grid, c.p.family, c.p.coefficients);
      const auto ref = dense_reference_operator(*c.grid, c.p.family, c.p.coefficients);
      const double gap = max_dense_gap(op, ref);
      lines.push_back({"assembly", c.name, gap <= 1e-14, false, gap, 1e-14, "relative to max |entry|"});
    }
  }

  {
    struct Case {
      const char* name;
      ProblemSpec p;
      StretchSpec radial;
    };
    for (const auto& c :
         {Case{"m-matrix P1 m=19 p=1", experiment_P1(), StretchSpec::radial(StretchKind::sine_power, 1.0)},
          Case{"m-matrix P2 m=19 p=2.5", experiment_P2(), StretchSpec::radial(StretchKind::sine_power, 2.5)},
          Case{"m-matrix P1 m=19 legacy", experiment_P1(), StretchSpec::radial(StretchKind::legacy_power, 0.6)}}) {
      const PolarGrid g = build_polar_grid(19, c.radial, StretchSpec::angular(StretchKind::identity));
      SparseOperator op = assemble_operator(g, c.p.family, c.p.coefficients);
      if (fault == CheckFault::stencil_sign_flip) {
        const auto row = static_cast<Eigen::Index>(GlobalOrdering{g.m, g.n}.index(2, 0));
        op.matrix.coeffRef(row, row - 1) *= -1.0;
      }
      const StepSystem sys = build_step_system(op, 0.4, 0.01);
      const SparseMatrix* mats[] = {&op.matrix, &sys.implicit_matrix};
      for (const SparseMatrix* which : mats) {
        const MMatrixReport rep = verify_m_matrix(*which);
        std::string detail = std::string("sign=") + (rep.sign_ok ? "ok" : "bad") +
                             " dominance=" + (rep.diag_dominance_ok ? "ok" : "bad") +
                             " irreducible=" + (rep.irreducibility_ok ? "ok" : "bad");
        if (!rep.sign_violations.empty()) detail += " sign rows: " + rows_to_string(rep.sign_violations);
        if (!rep.dominance_violations.empty())
          detail += " dominance rows: " + rows_to_string(rep.dominance_violations);
        const std::string nm = std::string(c.name) + (which == &op.matrix ? " operator" : " step matrix");
        lines.push_back({"assembly", nm, rep.ok(), false,
                         static_cast<double>(rep.sign_violations.size() + rep.dominance_violations.size()),
                         0.0, detail});
      }
    }
  }

  for (ProblemSpec p : {constant_state(1.5), constant_continuity(1.5)}) {
    const PolarGrid g = build_polar_grid(9, StretchSpec::radial(StretchKind::sine_power, 1.0),
                                         StretchSpec::angular(StretchKind::identity));
    const TimeGrid tg = build_time_grid(5, 1.0, StretchSpec::temporal(StretchKind::identity, 1.0, 1.0));
    const MarchResult res = march(p, g, tg, 0.4);
    const double e = compute_errors(res, p, g, 1.0).maxerr;
    lines.push_back({"stepper", "constant invariance " + p.name, e <= 1e-12, false, e, 1e-12, ""});
  }
  return lines;
}

int command_check(const CommandContext& ctx, CheckFault fault, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const auto lines = run_checks(fault, seed);
  std::ostream& o = out_of(ctx);
  int failed = 0;
  for (const auto& l : lines) {
    const char* tag = l.informational ? "INFO" : (l.pass ? "PASS" : "FAIL");
    if (!l.informational && !l.pass) ++failed;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%-4s  %-9s %-40s measured=%.3e limit=%.1e", tag, l.module.c_str(),
                  l.name.c_str(), l.measured, l.limit);
    o << buf;
    if (!l.detail.empty()) o << "  " << l.detail;
    o << "\n";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o << (failed ? "check: " + std::to_string(failed) + " failed" : std::string("check: all passed"))
    << " in " << fmt(secs) << " s\n";
  return failed ? kExitCheck : kExitOk;
}

}  // namespace polardisk
