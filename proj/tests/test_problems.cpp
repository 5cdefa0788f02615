#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "polardisk/problems.hpp"

using namespace polardisk;
using doctest::Approx;

TEST_CASE("P1 definitions") {
  const auto p = experiment_P1();
  CHECK((*p.exact)(0.1, 1.0, 0.4) == Approx(0.904837418035960).epsilon(1e-14));
  for (double r : {0.0, 0.3, 0.9}) CHECK((*p.exact)(0.0, r, 1.0) == p.initial(r, 1.0));
  CHECK(std::abs(pde_residual(p, 0.05, 0.3, 1.0)) <= 1e-9);
  CHECK(residual_oracle(p).max_abs_residual <= 1e-8);
}

TEST_CASE("P2 and its printed variant") {
  const auto p = experiment_P2();
  CHECK(p.coefficients.b(0.25, 1.0) == Approx(0.5).epsilon(1e-15));
  const double t = 3e-6, th = 0.7;
  CHECK((*p.exact)(t, 1.0, th) == Approx(p.boundary(t, th)).epsilon(1e-15));
  CHECK(residual_oracle(p).max_abs_residual <= 1e-9);
  const auto printed = residual_oracle(experiment_P2_printed());
  CHECK(printed.max_abs_residual > 1e-6);
  CHECK_FALSE(experiment_P2_printed().notes.empty());
}

TEST_CASE("C1 and C2") {
  const auto c1 = experiment_C1();
  CHECK(c1.coefficients.D(0.0, 1.0) == 0.0);
  CHECK(c1.coefficients.E(0.0, 1.0) == 0.0);
  CHECK((*c1.exact)(0.1, 0.5, std::numbers::pi / 2) == Approx(1.3059720996112536).epsilon(1e-14));
  CHECK(residual_oracle(c1).max_abs_residual <= 1e-8);

  const auto c2 = experiment_C2();
  const double t = 0.04, th = 2.1, s = std::sin(th);
  CHECK(c2.boundary(t, th) == Approx(std::exp(-t) * s * s + s * s).epsilon(1e-15));
  CHECK((*c2.exact)(t, 1.0, th) == Approx(c2.boundary(t, th)).epsilon(1e-15));
  CHECK((*c2.exact)(0.0, 0.4, th) == Approx(c2.initial(0.4, th)).epsilon(1e-15));
  CHECK(residual_oracle(c2).max_abs_residual <= 1e-8);

  // the printed sources carry +r^2(1-r)^{-3/2}/4 inside the bracket
  for (const auto& p : {experiment_C1_printed(), experiment_C2_printed()}) {
    const auto rep = residual_oracle(p);
    CHECK(rep.max_abs_residual > 1.0);
    const double r = rep.worst_r;
    CHECK(rep.max_abs_residual == Approx(r * r / (2.0 * std::pow(1.0 - r, 1.5))).epsilon(1e-6));
  }
}

TEST_CASE("a dropped source term shows up with its magnitude") {
  const auto p = experiment_P1();
  const auto f = p.source;
  const auto bad = with_source(p, [f](double t, double r, double th) { return f(t, r, th) + 4.0 * std::exp(-t); },
                               "-typo");
  CHECK(bad.name == "P1-typo");
  const auto rep = residual_oracle(bad);
  CHECK(rep.max_abs_residual == Approx(4.0 * std::exp(-rep.worst_t)).epsilon(1e-8));
}

TEST_CASE("the oracle is reproducible") {
  const auto a = residual_oracle(experiment_C1(), 20, 11);
  const auto b = residual_oracle(experiment_C1(), 20, 11);
  CHECK(a.max_abs_residual == b.max_abs_residual);
  CHECK(a.worst_r == b.worst_r);
  CHECK(a.worst_t == b.worst_t);
  CHECK(a.samples == 20);
  CHECK(a.seed == 11);
  const auto c = residual_oracle(experiment_C1(), 20, 12);
  CHECK(c.worst_r != a.worst_r);
}

TEST_CASE("polynomial solution measures the oracle truncation") {
  CHECK(residual_oracle(polynomial_check(), 50, 3).max_abs_residual <= 1e-10);
}

TEST_CASE("boundary, initial and exact agree for every problem") {
  for (const auto& name : problem_names()) {
    CAPTURE(name);
    const auto p = make_problem(name);
    CHECK(p.name == name);
    CHECK(compatibility_defect(p) <= 1e-12);
  }
}

TEST_CASE("registry errors") {
  CHECK_THROWS_AS(make_problem("P3"), UnknownProblem);
  auto p = experiment_P1();
  p.exact.reset();
  CHECK_THROWS_AS(residual_oracle(p), std::invalid_argument);
  CHECK_THROWS_AS(pde_residual(p, 0.1, 0.5, 0.0), std::invalid_argument);
}

TEST_CASE("Ridders derivative") {
  double err = 0.0;
  CHECK(ridders_derivative([](double x) { return std::sin(x); }, 0.3, 0.1, 1, &err) ==
        Approx(std::cos(0.3)).epsilon(1e-12));
  CHECK(err < 1e-10);
  CHECK(ridders_derivative([](double x) { return std::exp(x); }, 0.5, 0.1, 2) ==
        Approx(std::exp(0.5)).epsilon(1e-9));
  CHECK_THROWS_AS(ridders_derivative([](double x) { return x; }, 0.0, 0.1, 3), std::invalid_argument);
}
