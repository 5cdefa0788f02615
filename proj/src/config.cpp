#include "polardisk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace polardisk {

using nlohmann::json;

namespace {

std::string with_line(const std::string& field, const std::string& message, int line) {
  std::string s = "config: " + field + ": " + message;
  if (line > 0) s += " (line " + std::to_string(line) + ")";
  return s;
}

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// Line of the dotted key path "a.b" in the source text, 0 when not found.
int line_of_key(const std::string& text, const std::string& dotted) {
  if (text.empty()) return 0;
  std::size_t pos = 0;
  std::stringstream ss(dotted);
  std::string part;
  bool found = false;
  while (std::getline(ss, part, '.')) {
    const std::size_t at = text.find('"' + part + '"', pos);
    if (at == std::string::npos) return found ? line_of_offset(text, pos) : 0;
    pos = at;
    found = true;
  }
  return found ? line_of_offset(text, pos) : 0;
}

json stretch_json(const StretchChoice& s) {
  return json{{"kind", to_string(s.kind)}, {"exponent", s.exponent}};
}

class Reader {
 public:
  explicit Reader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& msg) const {
    throw ConfigError(field, msg, line_of_key(text_, field));
  }

  template <class T>
  void get(const json& obj, const std::string& prefix, const char* key, T& out) const {
    if (!obj.contains(key)) return;
    const std::string field = prefix.empty() ? key : prefix + "." + key;
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      fail(field, "has the wrong type");
    }
  }

  void stretch(const json& obj, const char* key, StretchChoice& out) const {
    if (!obj.contains(key)) return;
    const json& s = obj.at(key);
    if (!s.is_object()) fail(key, "must be an object with kind and exponent");
    std::string kind = to_string(out.kind);
    get(s, key, "kind", kind);
    try {
      out.kind = stretch_kind_from_string(kind);
    } catch (const std::exception&) {
      fail(std::string(key) + ".kind", "unknown stretching '" + kind + "'");
    }
    get(s, key, "exponent", out.exponent);
  }

  const std::string& text() const { return text_; }

 private:
  const std::string& text_;
};

void check(bool ok, const std::string& field, const std::string& msg) {
  if (!ok) throw ConfigError(field, msg);
}

}  // namespace

ConfigError::ConfigError(std::string field, const std::string& message, int line)
    : std::runtime_error(with_line(field, message, line)),
      field_(std::move(field)),
      message_(message),
      line_(line) {}

std::string to_string(StepPolicy p) {
  switch (p) {
    case StepPolicy::fixed: return "fixed";
    case StepPolicy::proportional_h: return "h";
    case StepPolicy::proportional_h2: return "h2";
  }
  return "fixed";
}

StepPolicy step_policy_from_string(const std::string& s) {
  if (s == "fixed") return StepPolicy::fixed;
  if (s == "h") return StepPolicy::proportional_h;
  if (s == "h2") return StepPolicy::proportional_h2;
  throw std::invalid_argument("unknown step policy '" + s + "'");
}

void RunConfig::validate() const {
  const auto names = problem_names();
  check(std::find(names.begin(), names.end(), problem) != names.end(), "problem",
        "unknown problem '" + problem + "'");
  check(m >= 1, "m", "must be >= 1, got " + std::to_string(m));
  check(K >= 1, "K", "must be >= 1, got " + std::to_string(K));
  if (T) check(std::isfinite(*T) && *T > 0.0, "T", "must be positive");
  check(a > 0.0 && a < 1.0, "a", "must lie in (0, 1)");
  check(std::isfinite(radial.exponent) && radial.exponent > 0.0, "radial.exponent", "must be > 0");
  check(std::isfinite(angular.exponent) && angular.exponent > 0.0, "angular.exponent", "must be > 0");
  check(std::isfinite(temporal.exponent) && temporal.exponent > 0.0, "temporal.exponent",
        "must be > 0");
  check(angular.kind != StretchKind::legacy_power, "angular.kind", "legacy_power is radial only");
  check(temporal.kind != StretchKind::legacy_power, "temporal.kind", "legacy_power is radial only");
  check(std::isfinite(dt_scale) && dt_scale > 0.0, "dt_scale", "must be > 0");
  check(tolerance > 0.0 && tolerance < 1.0, "solver.tolerance", "must lie in (0, 1)");
}

EffectiveRun effective(const RunConfig& cfg) {
  cfg.validate();
  EffectiveRun e;
  e.problem = cfg.problem;
  e.m = cfg.m;
  e.T = cfg.T ? *cfg.T : make_problem(cfg.problem).horizon;
  const double h = 1.0 / (cfg.m + 1);
  switch (cfg.step_policy) {
    case StepPolicy::fixed: e.K = cfg.K; break;
    case StepPolicy::proportional_h:
      e.K = std::max(1, static_cast<int>(std::lround(e.T / (cfg.dt_scale * h))));
      break;
    case StepPolicy::proportional_h2:
      e.K = std::max(1, static_cast<int>(std::lround(e.T / (cfg.dt_scale * h * h))));
      break;
  }
  e.a = cfg.modes.difference ? cfg.a : 0.5;
  auto pick = [](bool on, const StretchChoice& c) { return on ? c.kind : StretchKind::identity; };
  e.radial = StretchSpec::radial(pick(cfg.modes.radius, cfg.radial), cfg.radial.exponent);
  e.angular = StretchSpec::angular(pick(cfg.modes.angle, cfg.angular), cfg.angular.exponent);
  e.temporal = StretchSpec::temporal(pick(cfg.modes.time, cfg.temporal), cfg.temporal.exponent, e.T);
  e.solver.kind = cfg.solver;
  e.solver.tolerance = cfg.tolerance;
  return e;
}

double radial_rate(const StretchSpec& radial, double sigma) {
  double p = 1.0;
  if (radial.kind == StretchKind::sine_power) p = radial.exponent;
  if (radial.kind == StretchKind::legacy_power) p = radial.exponent + 1.0;
  return std::min(p * sigma, 2.0);
}

std::string config_to_json(const RunConfig& c, int indent) {
  json j;
  j["problem"] = c.problem;
  j["m"] = c.m;
  j["K"] = c.K;
  j["T"] = c.T ? json(*c.T) : json(nullptr);
  j["a"] = c.a;
  j["radial"] = stretch_json(c.radial);
  j["angular"] = stretch_json(c.angular);
  j["temporal"] = stretch_json(c.temporal);
  j["modes"] = {{"radius", c.modes.radius},
                {"angle", c.modes.angle},
                {"time", c.modes.time},
                {"difference", c.modes.difference}};
  j["step_policy"] = to_string(c.step_policy);
  j["dt_scale"] = c.dt_scale;
  j["solver"] = {{"kind", to_string(c.solver)}, {"tolerance", c.tolerance}};
  j["output"] = {{"dir", c.out_dir}, {"error_field", c.error_field}, {"dump_matrix", c.dump_matrix}};
  j["seed"] = c.seed;
  j["label"] = c.label;
  return j.dump(indent);
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("document", "malformed JSON", line_of_offset(text, e.byte));
  }
  if (!j.is_object()) throw ConfigError("document", "top level must be an object", 1);
  const Reader rd(text);
  RunConfig c;
  rd.get(j, "", "problem", c.problem);
  rd.get(j, "", "m", c.m);
  rd.get(j, "", "K", c.K);
  if (j.contains("T") && !j.at("T").is_null()) {
    double T = 0.0;
    rd.get(j, "", "T", T);
    c.T = T;
  }
  rd.get(j, "", "a", c.a);
  rd.stretch(j, "radial", c.radial);
  rd.stretch(j, "angular", c.angular);
  rd.stretch(j, "temporal", c.temporal);
  if (j.contains("modes")) {
    const json& m = j.at("modes");
    rd.get(m, "modes", "radius", c.modes.radius);
    rd.get(m, "modes", "angle", c.modes.angle);
    rd.get(m, "modes", "time", c.modes.time);
    rd.get(m, "modes", "difference", c.modes.difference);
  }
  if (j.contains("step_policy")) {
    std::string s;
    rd.get(j, "", "step_policy", s);
    try {
      c.step_policy = step_policy_from_string(s);
    } catch (const std::exception&) {
      rd.fail("step_policy", "must be fixed, h or h2");
    }
  }
  rd.get(j, "", "dt_scale", c.dt_scale);
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    std::string kind = to_string(c.solver);
    rd.get(s, "solver", "kind", kind);
    try {
      c.solver = solver_kind_from_string(kind);
    } catch (const std::exception&) {
      rd.fail("solver.kind", "must be direct or iterative");
    }
    rd.get(s, "solver", "tolerance", c.tolerance);
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    rd.get(o, "output", "dir", c.out_dir);
    rd.get(o, "output", "error_field", c.error_field);
    rd.get(o, "output", "dump_matrix", c.dump_matrix);
  }
  rd.get(j, "", "seed", c.seed);
  rd.get(j, "", "label", c.label);
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(e.field(), e.message(), line_of_key(text, e.field()));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

SweepAxes sweep_axes_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("document", "malformed JSON", line_of_offset(text, e.byte));
  }
  SweepAxes ax;
  if (!j.is_object() || !j.contains("sweep")) return ax;
  const json& s = j.at("sweep");
  const Reader rd(text);
  rd.get(s, "sweep", "m", ax.m);
  rd.get(s, "sweep", "K", ax.K);
  rd.get(s, "sweep", "a", ax.a);
  rd.get(s, "sweep", "p", ax.p);
  rd.get(s, "sweep", "q", ax.q);
  rd.get(s, "sweep", "l", ax.l);
  return ax;
}

std::vector<RunConfig> expand_sweep(const RunConfig& base, const SweepAxes& axes) {
  std::vector<RunConfig> plan{base};
  auto expand = [&plan](const auto& values, auto apply) {
    if (values.empty()) return;
    std::vector<RunConfig> next;
    next.reserve(plan.size() * values.size());
    for (const RunConfig& c : plan)
      for (const auto& v : values) {
        RunConfig d = c;
        apply(d, v);
        next.push_back(std::move(d));
      }
    plan = std::move(next);
  };
  expand(axes.m, [](RunConfig& c, int v) { c.m = v; });
  expand(axes.K, [](RunConfig& c, int v) { c.K = v; });
  expand(axes.a, [](RunConfig& c, double v) { c.a = v; });
  expand(axes.p, [](RunConfig& c, double v) { c.radial.exponent = v; });
  expand(axes.q, [](RunConfig& c, double v) { c.angular.exponent = v; });
  expand(axes.l, [](RunConfig& c, double v) { c.temporal.exponent = v; });
  for (const RunConfig& c : plan) c.validate();
  return plan;
}

}  // namespace polardisk
