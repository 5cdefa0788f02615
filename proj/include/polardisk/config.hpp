#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polardisk/mesh.hpp"
#include "polardisk/problems.hpp"
#include "polardisk/solver.hpp"

namespace polardisk {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message, int line = 0);
  const std::string& field() const { return field_; }
  const std::string& message() const { return message_; }
  int line() const { return line_; }

 private:
  std::string field_;
  std::string message_;
  int line_;
};

struct StretchChoice {
  StretchKind kind = StretchKind::identity;
  double exponent = 1.0;
  bool operator==(const StretchChoice&) const = default;
};

/// true means the dimension is adaptive.  A disabled dimension falls back to
/// the identity map; a disabled difference toggle pins a = 0.5.
struct ModeToggles {
  bool radius = true;
  bool angle = true;
  bool time = true;
  bool difference = true;
  bool operator==(const ModeToggles&) const = default;
};

/// How K follows the mesh: fixed uses K as given, otherwise
/// K = max(1, round(T / (dt_scale * h^power))) with power 1 or 2.
enum class StepPolicy { fixed, proportional_h, proportional_h2 };

std::string to_string(StepPolicy p);
StepPolicy step_policy_from_string(const std::string& s);

struct RunConfig {
  std::string problem = "P1";
  int m = 19;
  int K = 10;
  std::optional<double> T;  // problem horizon when absent
  double a = 0.5;
  StretchChoice radial{StretchKind::sine_power, 1.0};
  StretchChoice angular{};
  StretchChoice temporal{};
  ModeToggles modes{};
  StepPolicy step_policy = StepPolicy::fixed;
  double dt_scale = 1.0;
  SolverKind solver = SolverKind::direct;
  double tolerance = 1e-10;
  std::string out_dir = ".";
  bool error_field = false;
  std::string dump_matrix;
  std::uint64_t seed = 1;
  std::string label;

  bool operator==(const RunConfig&) const = default;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// Concrete parameters after applying the mode toggles and the step policy.
struct EffectiveRun {
  std::string problem;
  int m = 0;
  int K = 0;
  double T = 0.0;
  double a = 0.5;
  StretchSpec radial;
  StretchSpec angular;
  StretchSpec temporal;
  SolverOptions solver;
};

EffectiveRun effective(const RunConfig& cfg);

/// Convergence rate alpha = min(p sigma, 2) for the radial map of a run.
double radial_rate(const StretchSpec& radial, double sigma);

std::string config_to_json(const RunConfig& cfg, int indent = 2);
/// Missing keys keep their defaults.  Errors carry the line of the offending key.
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);

/// Parameter lists for a sweep; empty lists keep the base value.
struct SweepAxes {
  std::vector<int> m;
  std::vector<int> K;
  std::vector<double> a;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> l;
};

SweepAxes sweep_axes_from_json(const std::string& text);
/// Cartesian product in the fixed order m, K, a, p, q, l (last varies fastest).
std::vector<RunConfig> expand_sweep(const RunConfig& base, const SweepAxes& axes);

}  // namespace polardisk
