#include "polardisk/mesh.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace polardisk {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t mix(std::uint64_t seed, std::uint64_t v) {
  // splitmix64 finalizer
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  seed ^= seed >> 30;
  seed *= 0xbf58476d1ce4e5b9ULL;
  seed ^= seed >> 27;
  return seed;
}

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }
}  // namespace

std::string to_string(Dimension d) {
  switch (d) {
    case Dimension::radial: return "radial";
    case Dimension::angular: return "angular";
    case Dimension::temporal: return "temporal";
  }
  return "?";
}

std::string to_string(StretchKind k) {
  switch (k) {
    case StretchKind::sine_power: return "sine_power";
    case StretchKind::legacy_power: return "legacy_power";
    case StretchKind::identity: return "identity";
  }
  return "?";
}

StretchKind stretch_kind_from_string(const std::string& s) {
  if (s == "sine_power" || s == "sine") return StretchKind::sine_power;
  if (s == "legacy_power" || s == "legacy") return StretchKind::legacy_power;
  if (s == "identity" || s == "uniform") return StretchKind::identity;
  throw std::invalid_argument("unknown stretch kind '" + s + "'");
}

StretchSpec StretchSpec::radial(StretchKind kind, double exponent) {
  return {Dimension::radial, kind, exponent, 1.0};
}

StretchSpec StretchSpec::angular(StretchKind kind, double exponent) {
  return {Dimension::angular, kind, exponent, kTwoPi};
}

StretchSpec StretchSpec::temporal(StretchKind kind, double exponent, double horizon) {
  return {Dimension::temporal, kind, exponent, horizon};
}

void StretchSpec::validate() const {
  if (!(span > 0.0) || !std::isfinite(span))
    throw std::domain_error("stretch span must be positive");
  if (kind == StretchKind::identity) return;
  if (!(exponent > 0.0) || !std::isfinite(exponent))
    throw std::domain_error(to_string(dimension) + " stretch exponent must be positive");
  if (kind == StretchKind::legacy_power && dimension != Dimension::radial)
    throw std::domain_error("legacy_power stretching is defined for the radius only");
}

double stretch_eval(const StretchSpec& spec, double s) {
  spec.validate();
  if (!(s >= 0.0 && s <= spec.span))
    throw std::domain_error("stretch argument outside [0, span]");
  switch (spec.kind) {
    case StretchKind::identity:
      return s;
    case StretchKind::legacy_power:
      return 1.0 - std::pow(1.0 - s, spec.exponent + 1.0);
    case StretchKind::sine_power: {
      if (s == spec.span) return spec.span;
      const double x = s / spec.span;
      return spec.span * std::sin(std::pow(x, spec.exponent) * kPi / 2.0);
    }
  }
  return s;
}

double PolarGrid::mu_at(int j) const {
  j %= n;
  if (j < 0) j += n;
  return j == 0 ? mu[n] : mu[j];
}

double PolarGrid::theta_at(int j) const {
  j %= n;
  if (j < 0) j += n;
  return theta[j];
}

std::uint64_t PolarGrid::id() const {
  std::uint64_t seed = mix(mix(0, static_cast<std::uint64_t>(m)), static_cast<std::uint64_t>(n));
  for (const auto* s : {&radial_spec, &angular_spec}) {
    seed = mix(seed, static_cast<std::uint64_t>(s->kind));
    seed = mix(seed, bits(s->exponent));
  }
  return seed;
}

namespace {

PolarGrid make_grid(int m, int n, const StretchSpec& radial, const StretchSpec& angular,
                    bool check_bound) {
  if (m < 1) throw std::domain_error("m must be at least 1");
  if (n < 3) throw std::domain_error("n must be at least 3");
  if (radial.dimension != Dimension::radial || angular.dimension != Dimension::angular)
    throw std::domain_error("stretch specs passed for the wrong dimensions");
  radial.validate();
  angular.validate();

  PolarGrid g;
  g.m = m;
  g.n = n;
  g.radial_spec = radial;
  g.angular_spec = angular;

  const double h = 1.0 / (m + 1);
  g.r.resize(m + 2);
  for (int i = 0; i <= m + 1; ++i)
    g.r[i] = i == m + 1 ? 1.0 : stretch_eval(radial, i * h);
  g.r_half.resize(m + 1);
  for (int i = 0; i <= m; ++i) g.r_half[i] = (g.r[i] + g.r[i + 1]) / 2.0;
  g.h.assign(m + 2, 0.0);
  for (int i = 1; i <= m + 1; ++i) g.h[i] = g.r[i] - g.r[i - 1];

  const double dmu = kTwoPi / n;
  g.theta.resize(n + 1);
  for (int j = 0; j <= n; ++j)
    g.theta[j] = j == n ? kTwoPi : stretch_eval(angular, j * dmu);
  g.mu.assign(n + 1, 0.0);
  for (int j = 1; j <= n; ++j) g.mu[j] = g.theta[j] - g.theta[j - 1];
  g.mu[0] = g.mu[n];
  g.mu_half.resize(n);
  for (int j = 0; j < n; ++j) g.mu_half[j] = (g.mu_at(j) + g.mu_at(j + 1)) / 2.0;

  for (int i = 1; i <= m + 1; ++i)
    if (!(g.h[i] > 0.0)) throw std::domain_error("radial nodes are not strictly increasing");
  for (int j = 1; j <= n; ++j)
    if (!(g.mu[j] > 0.0)) throw std::domain_error("angular nodes are not strictly increasing");
  if (check_bound && g.uniform_angle() && dmu * dmu > kAngularCouplingBound * h)
    throw std::domain_error("angular spacing violates mu^2 <= M0 h");
  return g;
}

}  // namespace

int angular_count(int m) { return static_cast<int>(std::floor(2.0 * m * kPi)); }

PolarGrid build_polar_grid(int m, const StretchSpec& radial, const StretchSpec& angular) {
  if (m < 1) throw std::domain_error("m must be at least 1");
  return make_grid(m, angular_count(m), radial, angular, true);
}

PolarGrid build_polar_grid(int m, int n, const StretchSpec& radial, const StretchSpec& angular) {
  return make_grid(m, n, radial, angular, false);
}

TimeGrid build_time_grid(int K, double T, const StretchSpec& temporal) {
  if (K < 0) throw std::domain_error("K must be nonnegative");
  if (!(T > 0.0)) throw std::domain_error("time horizon must be positive");
  StretchSpec spec = temporal;
  spec.dimension = Dimension::temporal;
  spec.span = T;
  spec.validate();

  TimeGrid tg;
  tg.K = K;
  tg.T = T;
  tg.spec = spec;
  tg.t.resize(K + 1);
  for (int k = 0; k <= K; ++k)
    tg.t[k] = k == K ? T : stretch_eval(spec, T * k / K);
  tg.t[0] = 0.0;
  tg.dt.resize(K);
  for (int k = 0; k < K; ++k) {
    // uniform grids keep one bit pattern so the step matrix is factorized once
    tg.dt[k] = spec.is_identity() ? T / K : tg.t[k + 1] - tg.t[k];
    if (!(tg.dt[k] > 0.0)) throw std::domain_error("time grid is not strictly increasing");
  }
  return tg;
}

}  // namespace polardisk
