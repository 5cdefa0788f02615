#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace polardisk {

enum class Dimension { radial, angular, temporal };
enum class StretchKind { sine_power, legacy_power, identity };

std::string to_string(Dimension d);
std::string to_string(StretchKind k);
StretchKind stretch_kind_from_string(const std::string& s);

/// One-parameter monotone map of [0, span] onto itself.
///
/// sine_power:   radial   s -> sin(s^p pi/2)
///               angular  s -> 2pi sin((s/2pi)^q pi/2)
///               temporal s -> T sin((s/T)^l pi/2)
/// legacy_power: s -> 1 - (1-s)^(p+1), radial only
/// identity:     s -> s
struct StretchSpec {
  Dimension dimension = Dimension::radial;
  StretchKind kind = StretchKind::identity;
  double exponent = 1.0;
  double span = 1.0;

  static StretchSpec radial(StretchKind kind, double exponent = 1.0);
  static StretchSpec angular(StretchKind kind, double exponent = 1.0);
  static StretchSpec temporal(StretchKind kind, double exponent, double horizon);

  /// Throws std::domain_error when the spec is not a valid stretching.
  void validate() const;
  bool is_identity() const { return kind == StretchKind::identity; }
};

double stretch_eval(const StretchSpec& spec, double s);

/// Nodes of the unit disk: r_0 = 0 .. r_{m+1} = 1 and theta_0 = 0 .. theta_n = 2pi.
///
/// Vectors are indexed with the natural subscripts: h[i] = r_i - r_{i-1} for
/// i = 1..m+1 (h[0] is unused and zero), mu[j] = theta_j - theta_{j-1} for
/// j = 1..n with mu[0] = mu[n], r_half[i] = r_{i+1/2} for i = 0..m and
/// mu_half[j] = mu_{j+1/2} for j = 0..n-1 (periodic).
struct PolarGrid {
  int m = 0;
  int n = 0;
  std::vector<double> r;
  std::vector<double> r_half;
  std::vector<double> h;
  std::vector<double> theta;
  std::vector<double> mu;
  std::vector<double> mu_half;
  StretchSpec radial_spec;
  StretchSpec angular_spec;

  double mu_at(int j) const;  // periodic in j
  double theta_at(int j) const;  // theta_j for j in [0, n), wrapped
  bool uniform_angle() const { return angular_spec.is_identity(); }
  std::size_t unknowns() const { return static_cast<std::size_t>(m) * n + 1; }
  /// Stable identifier of the construction parameters.
  std::uint64_t id() const;
};

/// Upper bound for mu^2 / h asserted on uniform angular grids.
inline constexpr double kAngularCouplingBound = 4.0;

/// n = floor(2 m pi), as used by every experiment.
int angular_count(int m);

PolarGrid build_polar_grid(int m, const StretchSpec& radial, const StretchSpec& angular);
/// Explicit angular count for synthetic grids; the mu^2 bound is not asserted.
PolarGrid build_polar_grid(int m, int n, const StretchSpec& radial, const StretchSpec& angular);

struct TimeGrid {
  int K = 0;
  double T = 0.0;
  std::vector<double> t;
  std::vector<double> dt;  // t[k+1] - t[k]; exactly T/K on uniform grids
  StretchSpec spec;
};

/// t_k = V(k T / K).  Identity spec gives uniform steps T/K.
TimeGrid build_time_grid(int K, double T, const StretchSpec& temporal);

}  // namespace polardisk
