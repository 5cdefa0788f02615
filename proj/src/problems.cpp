#include "polardisk/problems.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace polardisk {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }
double s2(double th) { return sq(std::sin(th)); }

ProblemSpec continuity_base(std::string name) {
  ProblemSpec p;
  p.name = std::move(name);
  p.family = Family::continuity;
  p.coefficients = CoefficientSet::continuity([](double r, double) { return r; },
                                              [](double r, double) { return r; });
  p.horizon = 0.1;
  p.sigma = 0.5;
  return p;
}

// sign = -1 gives the consistent source, +1 the printed one
SpaceTimeFn c1_source(double sign) {
  return [sign](double t, double r, double th) {
    const double e = std::exp(-t);
    const double w = std::sqrt(1.0 - r);
    const double bracket = 2.0 * e + 2.0 * w - 2.0 * r / w + sign * 0.25 * r * r / (w * w * w) +
                           2.0 * s2(th) + 2.0 * std::cos(2.0 * th);
    return -e * r - bracket + 3.0 * e * r + 3.0 * r * w - 0.5 * r * r / w + 3.0 * r * s2(th) +
           std::sin(2.0 * th) * r;
  };
}

SpaceTimeFn c2_source(double sign) {
  return [sign](double t, double r, double th) {
    const double e = std::exp(-t);
    const double w = std::sqrt(1.0 - r);
    const double c2 = std::cos(2.0 * th);
    const double bracket = 2.0 * e * s2(th) + 2.0 * w - 2.0 * r / w +
                           sign * 0.25 * r * r / (w * w * w) + 2.0 * s2(th) + 2.0 * c2 + 2.0 * c2 * e;
    return -e * s2(th) * r - bracket + 3.0 * e * r * s2(th) + 3.0 * r * w - 0.5 * r * r / w +
           3.0 * r * s2(th) + std::sin(2.0 * th) * r * e + std::sin(2.0 * th) * r;
  };
}

ProblemSpec make_c1(ProblemSpec p) {
  p.exact = [](double t, double r, double th) {
    return std::exp(-t) * r + r * std::sqrt(1.0 - r) + s2(th) * r;
  };
  p.boundary = [](double t, double th) { return std::exp(-t) + s2(th); };
  p.initial = [](double r, double th) { return r + r * std::sqrt(1.0 - r) + r * s2(th); };
  return p;
}

ProblemSpec make_c2(ProblemSpec p) {
  p.exact = [](double t, double r, double th) {
    return std::exp(-t) * s2(th) * r + r * std::sqrt(1.0 - r) + s2(th) * r;
  };
  p.boundary = [](double t, double th) { return std::exp(-t) * s2(th) + s2(th); };
  p.initial = [](double r, double th) { return 2.0 * s2(th) * r + r * std::sqrt(1.0 - r); };
  return p;
}

SpaceTimeFn p2_source(bool printed) {
  return [printed](double t, double r, double th) {
    const double w = std::sqrt(1.0 - r);
    const double L = std::log1p(std::exp(t));
    const double Lb = printed ? std::log1p(std::exp(-t)) : L;
    const double bracket = 4.0 * w - 2.5 * r / w - 0.25 * r * r / (w * w * w) + 4.0 * L +
                           4.0 * s2(th) + 2.0 * std::cos(2.0 * th);
    return r * r * std::exp(t) / (1.0 + std::exp(t)) - bracket +
           std::sqrt(r) * (r * r * w + r * r * Lb + s2(th) * r * r);
  };
}

ProblemSpec make_p2(std::string name, bool printed) {
  ProblemSpec p;
  p.name = std::move(name);
  p.family = Family::parabolic;
  p.coefficients = CoefficientSet::parabolic([](double r, double) { return std::sqrt(r); });
  p.source = p2_source(printed);
  p.exact = [](double t, double r, double th) {
    return r * r * std::sqrt(1.0 - r) + r * r * std::log1p(std::exp(t)) + s2(th) * r * r;
  };
  p.boundary = [](double t, double th) { return std::log1p(std::exp(t)) + s2(th); };
  p.initial = [](double r, double th) {
    return r * r * std::sqrt(1.0 - r) + r * r * std::log(2.0) + s2(th) * r * r;
  };
  p.horizon = 1e-5;
  p.sigma = 0.5;
  p.notes = printed ? "source uses ln(1+e^-t) in the b*u term as printed"
                    : "source uses ln(1+e^t) in the b*u term, matching the exact solution";
  return p;
}

}  // namespace

ProblemSpec experiment_P1() {
  ProblemSpec p;
  p.name = "P1";
  p.family = Family::parabolic;
  p.coefficients = CoefficientSet::parabolic([](double, double) { return 0.0; });
  p.source = [](double t, double r, double) {
    const double e = std::exp(-t);
    const double w = std::sqrt(1.0 - r);
    return -e * r * r - 4.0 * e - 4.0 * w + 5.0 * r / (2.0 * w) + r * r / (4.0 * w * w * w);
  };
  p.exact = [](double t, double r, double) {
    return std::exp(-t) * r * r + r * r * std::sqrt(1.0 - r);
  };
  p.boundary = [](double t, double) { return std::exp(-t); };
  p.initial = [](double r, double) { return r * r + r * r * std::sqrt(1.0 - r); };
  p.horizon = 0.1;
  p.sigma = 0.5;
  return p;
}

ProblemSpec experiment_P2() { return make_p2("P2", false); }
ProblemSpec experiment_P2_printed() { return make_p2("P2-printed", true); }

ProblemSpec experiment_C1() {
  ProblemSpec p = make_c1(continuity_base("C1"));
  p.source = c1_source(-1.0);
  p.notes = "r^2(1-r)^{-3/2}/4 enters the source with a minus sign; sin(theta)^2 reading";
  return p;
}

ProblemSpec experiment_C2() {
  ProblemSpec p = make_c2(continuity_base("C2"));
  p.source = c2_source(-1.0);
  p.notes = "r^2(1-r)^{-3/2}/4 enters the source with a minus sign; sin(theta)^2 reading";
  return p;
}

ProblemSpec experiment_C1_printed() {
  ProblemSpec p = make_c1(continuity_base("C1-printed"));
  p.source = c1_source(1.0);
  p.notes = "source as printed; residual r^2/(2(1-r)^{3/2}) against the exact solution";
  return p;
}

ProblemSpec experiment_C2_printed() {
  ProblemSpec p = make_c2(continuity_base("C2-printed"));
  p.source = c2_source(1.0);
  p.notes = "source as printed; residual r^2/(2(1-r)^{3/2}) against the exact solution";
  return p;
}

ProblemSpec constant_decay() {
  ProblemSpec p;
  p.name = "decay";
  p.family = Family::parabolic;
  p.coefficients = CoefficientSet::parabolic([](double, double) { return 0.0; });
  p.source = [](double t, double, double) { return -std::exp(-t); };
  p.exact = [](double t, double, double) { return std::exp(-t); };
  p.boundary = [](double t, double) { return std::exp(-t); };
  p.initial = [](double, double) { return 1.0; };
  p.horizon = 1.0;
  p.sigma = 1.0;
  return p;
}

ProblemSpec constant_state(double c) {
  ProblemSpec p;
  p.name = "constant";
  p.family = Family::parabolic;
  p.coefficients = CoefficientSet::parabolic([](double, double) { return 0.0; });
  p.source = [](double, double, double) { return 0.0; };
  p.exact = [c](double, double, double) { return c; };
  p.boundary = [c](double, double) { return c; };
  p.initial = [c](double, double) { return c; };
  p.horizon = 1.0;
  p.sigma = 1.0;
  return p;
}

ProblemSpec constant_continuity(double c) {
  ProblemSpec p;
  p.name = "constant-continuity";
  p.family = Family::continuity;
  p.coefficients = CoefficientSet::continuity([](double r, double) { return 1.0 + r * r; },
                                              [](double, double) { return 0.0; });
  p.source = [](double, double, double) { return 0.0; };
  p.exact = [c](double, double, double) { return c; };
  p.boundary = [c](double, double) { return c; };
  p.initial = [c](double, double) { return c; };
  p.horizon = 1.0;
  p.sigma = 1.0;
  return p;
}

ProblemSpec polynomial_check() {
  ProblemSpec p;
  p.name = "polynomial";
  p.family = Family::parabolic;
  p.coefficients = CoefficientSet::parabolic([](double, double) { return 0.0; });
  auto u = [](double t, double r, double th) {
    const double x = r * std::cos(th);
    const double y = r * std::sin(th);
    return t + r * r * r + x * x * y;
  };
  p.exact = u;
  p.source = [](double, double r, double th) { return 1.0 - 9.0 * r - 2.0 * r * std::sin(th); };
  p.boundary = [u](double t, double th) { return u(t, 1.0, th); };
  p.initial = [u](double r, double th) { return u(0.0, r, th); };
  p.horizon = 1.0;
  p.sigma = 1.0;
  return p;
}

std::vector<std::string> problem_names() {
  return {"P1",    "P2",         "P2-printed",       "C1",      "C2", "C1-printed",
          "C2-printed", "decay", "constant", "constant-continuity", "polynomial"};
}

ProblemSpec make_problem(const std::string& name) {
  if (name == "P1") return experiment_P1();
  if (name == "P2") return experiment_P2();
  if (name == "P2-printed") return experiment_P2_printed();
  if (name == "C1") return experiment_C1();
  if (name == "C2") return experiment_C2();
  if (name == "C1-printed") return experiment_C1_printed();
  if (name == "C2-printed") return experiment_C2_printed();
  if (name == "decay") return constant_decay();
  if (name == "constant") return constant_state();
  if (name == "constant-continuity") return constant_continuity();
  if (name == "polynomial") return polynomial_check();
  throw UnknownProblem("unknown problem '" + name + "'");
}

ProblemSpec with_source(ProblemSpec p, SpaceTimeFn source, std::string suffix) {
  p.source = std::move(source);
  p.name += suffix;
  return p;
}

double ridders_derivative(const std::function<double(double)>& f, double x, double h0, int order,
                          double* error_estimate) {
  constexpr int kLevels = 12;
  constexpr double kShrink = 1.4;
  constexpr double kShrink2 = kShrink * kShrink;
  auto stencil = [&](double h) {
    if (order == 1) return (f(x + h) - f(x - h)) / (2.0 * h);
    return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
  };
  if (order != 1 && order != 2) throw std::invalid_argument("ridders_derivative: order is 1 or 2");

  double tab[kLevels][kLevels];
  double h = h0;
  double best = stencil(h);
  double err = 1e300;
  tab[0][0] = best;
  for (int i = 1; i < kLevels; ++i) {
    h /= kShrink;
    tab[0][i] = stencil(h);
    double fac = kShrink2;
    for (int j = 1; j <= i; ++j) {
      tab[j][i] = (tab[j - 1][i] * fac - tab[j - 1][i - 1]) / (fac - 1.0);
      fac *= kShrink2;
      const double e = std::max(std::abs(tab[j][i] - tab[j - 1][i]),
                                std::abs(tab[j][i] - tab[j - 1][i - 1]));
      if (e <= err) {
        err = e;
        best = tab[j][i];
      }
    }
    if (std::abs(tab[i][i] - tab[i - 1][i - 1]) >= 2.0 * err) break;
  }
  if (error_estimate) *error_estimate = err;
  return best;
}

double pde_residual(const ProblemSpec& p, double t, double r, double th) {
  if (!p.exact) throw std::invalid_argument("pde_residual: problem '" + p.name + "' has no exact solution");
  const SpaceTimeFn& u = *p.exact;
  const double hr = 0.4 * std::min(r, 1.0 - r);
  const double hth = 0.3;
  const double ht = 0.4 * std::min(t, 0.05);
  auto along_r = [&](double rr) { return u(t, rr, th); };
  auto along_th = [&](double tt) { return u(t, r, tt); };
  auto along_t = [&](double tt) { return u(tt, r, th); };

  const double val = u(t, r, th);
  const double u_t = ridders_derivative(along_t, t, ht, 1);
  const double u_r = ridders_derivative(along_r, r, hr, 1);
  const double u_rr = ridders_derivative(along_r, r, hr, 2);
  const double u_th = ridders_derivative(along_th, th, hth, 1);
  const double u_thth = ridders_derivative(along_th, th, hth, 2);
  const double f = p.source(t, r, th);

  if (p.family == Family::parabolic) {
    const double lap = u_rr + u_r / r + u_thth / (r * r);
    return u_t - lap + p.coefficients.b(r, th) * val - f;
  }
  const SpatialFn& D = p.coefficients.D;
  const SpatialFn& E = p.coefficients.E;
  const double d = D(r, th);
  const double e = E(r, th);
  const double d_r = ridders_derivative([&](double rr) { return D(rr, th); }, r, hr, 1);
  const double d_th = ridders_derivative([&](double tt) { return D(r, tt); }, th, hth, 1);
  const double e_r = ridders_derivative([&](double rr) { return E(rr, th); }, r, hr, 1);
  const double e_th = ridders_derivative([&](double tt) { return E(r, tt); }, th, hth, 1);
  const double diffusion = d * u_rr + (d / r + d_r) * u_r + (d * u_thth + d_th * u_th) / (r * r);
  const double drift = val * e / r + u_r * e + val * e_r + (u_th * e + val * e_th) / r;
  return u_t - diffusion + drift - f;
}

ResidualReport residual_oracle(const ProblemSpec& problem, int samples, std::uint64_t seed) {
  if (!problem.exact) throw std::invalid_argument("residual_oracle: problem '" + problem.name +
                                                  "' has no exact solution");
  if (samples <= 0) throw std::invalid_argument("residual_oracle: samples must be positive");
  ResidualReport rep;
  rep.problem = problem.name;
  rep.samples = samples;
  rep.seed = seed;
  rep.notes = problem.notes;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    const double r = 0.05 + 0.9 * unit(rng);
    const double th = 2.0 * kPi * unit(rng);
    const double t = problem.horizon * (0.01 + 0.98 * unit(rng));
    const double res = std::abs(pde_residual(problem, t, r, th));
    if (s == 0 || res > rep.max_abs_residual || std::isnan(res)) {
      rep.max_abs_residual = std::isnan(res) ? INFINITY : res;
      rep.worst_t = t;
      rep.worst_r = r;
      rep.worst_theta = th;
      rep.source_at_worst = problem.source(t, r, th);
    }
  }
  return rep;
}

double compatibility_defect(const ProblemSpec& problem, int samples, std::uint64_t seed) {
  if (!problem.exact) return 0.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double r = unit(rng);
    const double th = 2.0 * kPi * unit(rng);
    const double t = problem.horizon * unit(rng);
    worst = std::max(worst, std::abs((*problem.exact)(0.0, r, th) - problem.initial(r, th)));
    worst = std::max(worst, std::abs((*problem.exact)(t, 1.0, th) - problem.boundary(t, th)));
  }
  return worst;
}

}  // namespace polardisk
