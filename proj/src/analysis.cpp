#include "polardisk/analysis.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

namespace polardisk {

ErrorReport compute_errors(const GridField& state, const ProblemSpec& problem,
                           const PolarGrid& grid, double t_final) {
  if (!problem.exact)
    throw std::invalid_argument("compute_errors: problem '" + problem.name + "' has no exact solution");
  if (state.m() != grid.m || state.n() != grid.n)
    throw std::invalid_argument("compute_errors: field does not match the grid");
  const SpaceTimeFn& u = *problem.exact;
  ErrorReport rep;
  rep.error_field = GridField(grid.m, grid.n);
  rep.origin_error = std::abs(state.origin() - u(t_final, 0.0, grid.theta[0]));
  rep.error_field.origin() = rep.origin_error;
  double sum = 0.0;
  double mx = 0.0;
  for (int j = 0; j < grid.n; ++j)
    for (int i = 1; i <= grid.m; ++i) {
      const double e = std::abs(state.at(i, j) - u(t_final, grid.r[i], grid.theta[j]));
      rep.error_field.at(i, j) = e;
      sum += e;
      mx = std::max(mx, e);
    }
  const double interior = static_cast<double>(grid.m) * grid.n;
  rep.maxerr_off_origin = mx;
  rep.meanerr_off_origin = sum / interior;
  rep.maxerr = std::max(mx, rep.origin_error);
  rep.meanerr = (sum + rep.origin_error) / (interior + 1.0);
  return rep;
}

ErrorReport compute_errors(const MarchResult& result, const ProblemSpec& problem,
                           const PolarGrid& grid, double t_final) {
  return compute_errors(result.final, problem, grid, t_final);
}

double ratio_diagnostic(double maxerr, double h, double alpha, double dt) {
  if (!(h > 0.0) || !(dt > 0.0)) throw std::invalid_argument("ratio_diagnostic: h and dt must be positive");
  return maxerr / (std::pow(h, alpha) + dt);
}

double convergence_order(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) throw std::invalid_argument("convergence_order: need at least two pairs");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [h, e] = pairs[k];
    if (!(e > 0.0) || !(h > 0.0)) throw std::invalid_argument("convergence_order: h and err must be positive");
    if (k > 0 && !(h < pairs[k - 1].first))
      throw std::invalid_argument("convergence_order: h must decrease strictly");
    const double x = std::log(h);
    const double y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pairs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

RunOutcome execute_run(const RunConfig& cfg) {
  RunOutcome out;
  SweepRow& row = out.row;
  row.config = cfg;
  const EffectiveRun e = effective(cfg);
  const ProblemSpec problem = make_problem(e.problem);
  out.grid = build_polar_grid(e.m, e.radial, e.angular);
  const TimeGrid tg = build_time_grid(e.K, e.T, e.temporal);
  row.n = out.grid.n;
  row.K = e.K;
  row.T = e.T;
  row.dt = e.T / e.K;
  row.a = e.a;

  const auto start = std::chrono::steady_clock::now();
  const MarchResult res = march(problem, out.grid, tg, e.a, {}, e.solver);
  out.report = compute_errors(res, problem, out.grid, e.T);
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  out.report.params = config_to_json(cfg, -1);
  row.maxerr = out.report.maxerr;
  row.meanerr = out.report.meanerr;
  row.maxerr_off_origin = out.report.maxerr_off_origin;
  row.meanerr_off_origin = out.report.meanerr_off_origin;
  row.ratio = ratio_diagnostic(row.maxerr, 1.0 / (e.m + 1), radial_rate(e.radial, problem.sigma), row.dt);
  row.factorizations = res.factorizations;
  for (double r : res.residuals) row.max_residual = std::max(row.max_residual, r);
  return out;
}

std::vector<SweepRow> run_sweep(const std::vector<RunConfig>& plan, int workers) {
  std::vector<SweepRow> rows(plan.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < plan.size(); k = next++) {
      try {
        rows[k] = execute_run(plan[k]).row;
      } catch (const std::exception& ex) {
        rows[k] = SweepRow{};
        rows[k].config = plan[k];
        rows[k].error = ex.what();
      }
      rows[k].index = k;
    }
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(plan.size())));
  if (count == 1) {
    work();
    return rows;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(count));
  for (int w = 0; w < count; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return rows;
}

TableLayout table_layout_from_string(const std::string& s) {
  if (s == "2.1" || s == "table_2_1") return TableLayout::table_2_1;
  if (s == "2.2" || s == "table_2_2") return TableLayout::table_2_2;
  if (s == "3.1" || s == "table_3_1") return TableLayout::table_3_1;
  if (s == "3.2" || s == "table_3_2") return TableLayout::table_3_2;
  if (s == "generic") return TableLayout::generic;
  throw std::invalid_argument("unknown table '" + s + "' (expected 2.1, 2.2, 3.1, 3.2)");
}

std::string to_string(TableLayout t) {
  switch (t) {
    case TableLayout::table_2_1: return "2.1";
    case TableLayout::table_2_2: return "2.2";
    case TableLayout::table_3_1: return "3.1";
    case TableLayout::table_3_2: return "3.2";
    case TableLayout::generic: return "generic";
  }
  return "generic";
}

namespace {

struct ModeColumn {
  const char* label;
  void (*apply)(RunConfig&);
};

void mode_full(RunConfig&) {}
void mode_radius(RunConfig& c) { c.modes.radius = false; }
void mode_angle(RunConfig& c) { c.modes.angle = false; }
void mode_time(RunConfig& c) { c.modes.time = false; }
void mode_difference(RunConfig& c) { c.modes.difference = false; }
void mode_none(RunConfig& c) { c.modes = ModeToggles{false, false, false, false}; }

const std::vector<ModeColumn>& parabolic_modes() {
  static const std::vector<ModeColumn> v{{"adaptive", mode_full},
                                         {"radius_non_adaptive", mode_radius},
                                         {"legacy", mode_full},
                                         {"non_adaptive", mode_none}};
  return v;
}

const std::vector<ModeColumn>& continuity_modes(bool with_none) {
  static const std::vector<ModeColumn> v5{{"full", mode_full},
                                          {"angle_non_adaptive", mode_angle},
                                          {"radius_non_adaptive", mode_radius},
                                          {"time_non_adaptive", mode_time},
                                          {"difference_non_adaptive", mode_difference}};
  static const std::vector<ModeColumn> v6 = [] {
    auto v = v5;
    v.push_back({"non_adaptive", mode_none});
    return v;
  }();
  return with_none ? v6 : v5;
}

RunConfig table_base(TableLayout layout, const TableOptions& opt) {
  RunConfig c;
  c.angular = {StretchKind::identity, 1.0};
  c.temporal = {StretchKind::identity, 1.0};
  switch (layout) {
    case TableLayout::table_2_1:
      c.problem = "P1";
      c.T = 0.1;
      c.a = 0.4;
      c.radial = {StretchKind::sine_power, 1.0};
      if (opt.dt) {
        c.step_policy = StepPolicy::fixed;
        c.K = std::max(1, static_cast<int>(std::lround(*c.T / *opt.dt)));
      } else {
        c.step_policy = StepPolicy::proportional_h;
        c.dt_scale = 1.0;
      }
      break;
    case TableLayout::table_2_2:
      c.problem = "P2";
      c.T = 1e-5;
      c.K = 10;
      c.a = 0.4;
      c.radial = {StretchKind::sine_power, 2.5};
      break;
    case TableLayout::table_3_1:
      c.problem = "C1-printed";
      c.T = 0.1;
      c.K = 10;
      c.a = 0.5;
      c.radial = {StretchKind::sine_power, 0.1};
      c.angular = {StretchKind::sine_power, 1.9};
      c.temporal = {StretchKind::sine_power, 1.5};
      break;
    case TableLayout::table_3_2:
      c.problem = "C2-printed";
      c.T = 0.1;
      c.K = 10;
      c.a = 0.1;
      c.radial = {StretchKind::sine_power, 0.5};
      c.angular = {StretchKind::sine_power, 5.0};
      c.temporal = {StretchKind::sine_power, 5.0};
      break;
    case TableLayout::generic: break;
  }
  return c;
}

const std::vector<ModeColumn>& layout_modes(TableLayout layout) {
  static const std::vector<ModeColumn> none;
  switch (layout) {
    case TableLayout::table_2_1:
    case TableLayout::table_2_2: return parabolic_modes();
    case TableLayout::table_3_1: return continuity_modes(false);
    case TableLayout::table_3_2: return continuity_modes(true);
    case TableLayout::generic: return none;
  }
  return none;
}

double legacy_exponent(TableLayout layout) { return layout == TableLayout::table_2_1 ? 0.6 : 0.1; }

}  // namespace

std::vector<RunConfig> table_plan(TableLayout layout, const TableOptions& options) {
  if (layout == TableLayout::generic) throw std::invalid_argument("table_plan: generic has no plan");
  std::vector<RunConfig> plan;
  for (int m : options.ms)
    for (const ModeColumn& mode : layout_modes(layout)) {
      RunConfig c = table_base(layout, options);
      c.m = m;
      c.label = mode.label;
      mode.apply(c);
      if (c.label == "legacy") c.radial = {StretchKind::legacy_power, legacy_exponent(layout)};
      plan.push_back(c);
    }
  return plan;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.8e", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

namespace {

std::string join(const std::vector<std::string>& cells) {
  std::string line;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) line += ',';
    line += csv_escape(cells[k]);
  }
  return line + "\n";
}

std::string emit_generic(const std::vector<SweepRow>& rows, bool wall) {
  std::vector<std::string> head{"index", "label", "problem", "m", "n", "K", "T", "dt", "a",
                                "radial_kind", "p", "angular_kind", "q", "temporal_kind", "l",
                                "radius", "angle", "time", "difference", "maxerr", "meanerr",
                                "maxerr_off_origin", "meanerr_off_origin", "ratio",
                                "factorizations", "max_residual"};
  if (wall) head.push_back("wall_time");
  head.push_back("error");
  std::string doc = join(head);
  auto b = [](bool v) { return std::string(v ? "1" : "0"); };
  for (const SweepRow& r : rows) {
    const RunConfig& c = r.config;
    std::vector<std::string> cells{std::to_string(r.index), c.label, c.problem, std::to_string(c.m),
                                   std::to_string(r.n), std::to_string(r.K), format_number(r.T),
                                   format_number(r.dt), format_number(r.a), to_string(c.radial.kind),
                                   format_number(c.radial.exponent), to_string(c.angular.kind),
                                   format_number(c.angular.exponent), to_string(c.temporal.kind),
                                   format_number(c.temporal.exponent), b(c.modes.radius),
                                   b(c.modes.angle), b(c.modes.time), b(c.modes.difference)};
    if (r.ok()) {
      for (double v : {r.maxerr, r.meanerr, r.maxerr_off_origin, r.meanerr_off_origin, r.ratio})
        cells.push_back(format_number(v));
      cells.push_back(std::to_string(r.factorizations));
      cells.push_back(format_number(r.max_residual));
    } else {
      cells.insert(cells.end(), 7, "");
    }
    if (wall) cells.push_back(r.ok() ? format_number(r.wall_time) : "");
    cells.push_back(r.error);
    doc += join(cells);
  }
  return doc;
}

}  // namespace

std::string emit_table(const std::vector<SweepRow>& rows, TableLayout layout, bool include_wall_time) {
  if (layout == TableLayout::generic) return emit_generic(rows, include_wall_time);

  const bool parabolic = layout == TableLayout::table_2_1 || layout == TableLayout::table_2_2;
  const bool mean = layout == TableLayout::table_3_2;
  const auto& modes = layout_modes(layout);

  std::map<int, std::map<std::string, const SweepRow*>> by_m;
  for (const SweepRow& r : rows) by_m[r.config.m][r.config.label] = &r;

  auto metric = [&](const SweepRow* r, bool use_mean) -> std::string {
    if (!r || !r->ok()) return "";
    if (parabolic) return format_number(use_mean ? r->meanerr : r->maxerr);
    return format_number(use_mean ? r->meanerr_off_origin : r->maxerr_off_origin);
  };

  std::vector<std::string> head{"m", "dt"};
  const std::string stat = mean ? "meanerr_" : "maxerr_";
  for (std::size_t k = 0; k < modes.size(); ++k) {
    head.push_back(stat + modes[k].label);
    if (parabolic && k == 0) head.push_back("ratio_adaptive");
  }
  if (layout == TableLayout::table_2_2)
    for (const auto& mode : modes) head.push_back(std::string("meanerr_") + mode.label);
  std::string doc = join(head);

  for (const auto& [m, cols] : by_m) {
    auto find = [&cols = cols](const char* label) -> const SweepRow* {
      auto it = cols.find(label);
      return it == cols.end() ? nullptr : it->second;
    };
    const SweepRow* first = find(modes.front().label);
    std::vector<std::string> cells{std::to_string(m),
                                   first && first->ok() ? format_number(first->dt) : ""};
    for (std::size_t k = 0; k < modes.size(); ++k) {
      const SweepRow* r = find(modes[k].label);
      cells.push_back(metric(r, mean));
      if (parabolic && k == 0) cells.push_back(r && r->ok() ? format_number(r->ratio) : "");
    }
    if (layout == TableLayout::table_2_2)
      for (const auto& mode : modes) cells.push_back(metric(find(mode.label), true));
    doc += join(cells);
  }
  return doc;
}

void write_error_field(std::ostream& out, const ErrorReport& report, const PolarGrid& grid) {
  out << "r,theta,abs_error\n";
  out << format_number(0.0) << ',' << format_number(0.0) << ',' << format_number(report.error_field.origin())
      << '\n';
  for (int j = 0; j < grid.n; ++j)
    for (int i = 1; i <= grid.m; ++i)
      out << format_number(grid.r[i]) << ',' << format_number(grid.theta[j]) << ','
          << format_number(report.error_field.at(i, j)) << '\n';
}

}  // namespace polardisk
