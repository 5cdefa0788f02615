#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polardisk/stencils.hpp"

namespace polardisk {

using SpaceTimeFn = std::function<double(double t, double r, double theta)>;
using BoundaryFn = std::function<double(double t, double theta)>;

/// A linear problem on the unit disk.
///
/// parabolic:   u_t - Lap u + b u = f
/// continuity:  n_t - div(D grad n) + (1/r) d_r(r n E) + (1/r) d_theta(n E) = GR
///
/// The continuity coefficients feed the discrete operator as printed; the
/// residual oracle checks the divergence form above.
struct ProblemSpec {
  std::string name;
  Family family = Family::parabolic;
  CoefficientSet coefficients;
  SpaceTimeFn source;
  BoundaryFn boundary;
  SpatialFn initial;
  std::optional<SpaceTimeFn> exact;
  double horizon = 1.0;
  double sigma = 0.5;  // boundary regularity exponent of the exact solution
  std::string notes;
};

class UnknownProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

ProblemSpec experiment_P1();
ProblemSpec experiment_P2();
/// P2 with the ln(1+e^{-t}) term taken literally.
ProblemSpec experiment_P2_printed();
/// C1/C2 with the source sign fixed so the exact solution satisfies the PDE.
ProblemSpec experiment_C1();
ProblemSpec experiment_C2();
/// C1/C2 with the source exactly as printed.  These reproduce the published tables.
ProblemSpec experiment_C1_printed();
ProblemSpec experiment_C2_printed();

/// u = e^{-t}, b = 0, f = -e^{-t}.
ProblemSpec constant_decay();
/// u = c with b = 0 and f = 0.
ProblemSpec constant_state(double c = 1.0);
/// n = c with D = 1 + r^2, E = 0 and GR = 0.
ProblemSpec constant_continuity(double c = 1.0);
/// u = t + r^3 + x^2 y, b = 0; the cubic makes finite differences nearly exact.
ProblemSpec polynomial_check();

std::vector<std::string> problem_names();
ProblemSpec make_problem(const std::string& name);

ProblemSpec with_source(ProblemSpec p, SpaceTimeFn source, std::string suffix = "-modified");

struct ResidualReport {
  std::string problem;
  double max_abs_residual = 0.0;
  double worst_t = 0.0;
  double worst_r = 0.0;
  double worst_theta = 0.0;
  double source_at_worst = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string notes;
};

/// PDE left side minus the source, evaluated on the exact solution at one point.
double pde_residual(const ProblemSpec& problem, double t, double r, double theta);

/// Evaluates the PDE residual of the exact solution at `samples` random points
/// with r in [0.05, 0.95], theta in [0, 2pi), t in (0, T).  Derivatives use
/// central differences refined by a Ridders extrapolation tableau.
ResidualReport residual_oracle(const ProblemSpec& problem, int samples = 20, std::uint64_t seed = 1);

/// Largest mismatch between exact and the initial/boundary data at `samples` points.
double compatibility_defect(const ProblemSpec& problem, int samples = 64, std::uint64_t seed = 7);

/// Ridders extrapolated central difference of order 1 or 2.
double ridders_derivative(const std::function<double(double)>& f, double x, double h0, int order,
                          double* error_estimate = nullptr);

}  // namespace polardisk
