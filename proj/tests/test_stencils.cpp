#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "polardisk/problems.hpp"
#include "polardisk/stencils.hpp"

using namespace polardisk;
using doctest::Approx;

namespace {

PolarGrid uniform(int m) {
  return build_polar_grid(m, StretchSpec::radial(StretchKind::identity),
                          StretchSpec::angular(StretchKind::identity));
}

PolarGrid graded(int m, double p) {
  return build_polar_grid(m, StretchSpec::radial(StretchKind::sine_power, p),
                          StretchSpec::angular(StretchKind::identity));
}

GridField sample(const PolarGrid& g, const SpatialFn& f) {
  GridField u(g);
  u.origin() = f(0.0, 0.0);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 1; i <= g.m; ++i) u.at(i, j) = f(g.r[i], g.theta[j]);
    u.ring(j) = f(1.0, g.theta[j]);
  }
  return u;
}

const SpatialFn zero = [](double, double) { return 0.0; };
const SpatialFn one = [](double, double) { return 1.0; };

}  // namespace

TEST_CASE("parabolic row on the m=3 uniform grid") {
  const auto g = uniform(3);
  REQUIRE(g.n == 18);
  const auto s = parabolic_interior_row(g, zero, 2, 0);
  // independent scalar evaluation of the printed formula
  CHECK(s.center == Approx(97.65612700023489).epsilon(1e-14));
  CHECK(s.west == Approx(-12.0).epsilon(1e-14));
  CHECK(s.east == Approx(-20.0).epsilon(1e-14));
  CHECK(s.south == Approx(-32.828063500117445).epsilon(1e-14));
  CHECK(s.north == s.south);
  CHECK_FALSE(s.is_origin_row);
}

TEST_CASE("first ring links to the origin") {
  const auto g = graded(5, 1.0);
  const auto s = parabolic_interior_row(g, zero, 1, 3);
  CHECK(s.origin_link == s.west);
  CHECK(s.origin_link < 0.0);
}

TEST_CASE("parabolic operator maps constants to b") {
  const auto g = graded(12, 1.3);
  const SpatialFn b = [](double r, double th) { return 1.0 + r * std::cos(th) * std::cos(th); };
  const auto rows = build_rows(g, Family::parabolic, CoefficientSet::parabolic(b));
  const auto out = apply_operator(rows, sample(g, one));
  CHECK(out.origin() == Approx(b(0.0, 0.0)));
  for (int j = 0; j < g.n; ++j)
    for (int i = 1; i <= g.m; ++i) CHECK(out.at(i, j) == Approx(b(g.r[i], g.theta[j])).epsilon(1e-10));
}

TEST_CASE("parabolic operator on r^2 is -4 at interior nodes and the origin") {
  const auto g = uniform(39);
  const auto rows = build_rows(g, Family::parabolic, CoefficientSet::parabolic(zero));
  const auto out = apply_operator(rows, sample(g, [](double r, double) { return r * r; }));
  CHECK(g.r[20] == Approx(0.5));
  CHECK(out.at(20, 7) == Approx(-4.0).epsilon(1e-10));
  CHECK(out.origin() == Approx(-4.0).epsilon(1e-12));
}

TEST_CASE("origin rows") {
  const auto g = graded(7, 1.0);
  const auto o = parabolic_origin_row(g, zero);
  CHECK(o.is_origin_row);
  CHECK(o.center == Approx(4.0 / (g.h[1] * g.h[1])));
  CHECK(o.ring_coefficient == Approx(-4.0 / (g.n * g.h[1] * g.h[1])));
  const auto ob = parabolic_origin_row(g, [](double, double) { return 2.5; });
  CHECK(ob.center - o.center == Approx(2.5));

  const auto rows = build_rows(g, Family::parabolic, CoefficientSet::parabolic([](double, double) { return 2.5; }));
  CHECK(apply_operator(rows, sample(g, one)).origin() == Approx(2.5));

  const auto c = continuity_origin_row(g, one, zero);
  CHECK(c.center == o.center);
  CHECK(c.ring_coefficient == o.ring_coefficient);

  const auto cr = continuity_origin_row(g, [](double r, double) { return r; }, [](double r, double) { return r; });
  CHECK(cr.center == 0.0);
  CHECK(cr.ring_coefficient == 0.0);
}

TEST_CASE("continuity origin with D=2 on r^2") {
  const auto g = uniform(15);
  const auto rows = build_rows(g, Family::continuity,
                               CoefficientSet::continuity([](double, double) { return 2.0; }, zero));
  CHECK(apply_operator(rows, sample(g, [](double r, double) { return r * r; })).origin() ==
        Approx(-8.0).epsilon(1e-12));
}

TEST_CASE("continuity with D=1, E=0 reduces to the parabolic rows") {
  const auto g = graded(9, 0.7);
  const auto p = build_rows(g, Family::parabolic, CoefficientSet::parabolic(zero));
  const auto c = build_rows(g, Family::continuity, CoefficientSet::continuity(one, zero));
  for (int j = 0; j < g.n; ++j)
    for (int i = 1; i <= g.m; ++i) {
      const auto& a = p.row(i, j);
      const auto& b = c.row(i, j);
      CHECK(std::abs(a.center - b.center) <= 1e-15 * std::abs(a.center));
      CHECK(std::abs(a.west - b.west) <= 1e-15 * std::abs(a.west));
      CHECK(std::abs(a.east - b.east) <= 1e-15 * std::abs(a.east));
      CHECK(std::abs(a.south - b.south) <= 1e-14 * std::abs(a.south));
      CHECK(std::abs(a.north - b.north) <= 1e-14 * std::abs(a.north));
    }
  const auto out = apply_operator(c, sample(g, one));
  for (int i = 1; i <= g.m; ++i) CHECK(std::abs(out.at(i, 0)) <= 1e-9);
}

TEST_CASE("continuity drift terms follow the forward differences") {
  const auto g = build_polar_grid(6, StretchSpec::radial(StretchKind::sine_power, 1.2),
                                  StretchSpec::angular(StretchKind::sine_power, 1.9));
  const SpatialFn D = [](double r, double) { return 1.0 + r; };
  const SpatialFn E = [](double r, double th) { return 0.5 + r * std::sin(th); };
  const auto with = continuity_interior_row(g, D, E, 3, 5);
  const auto without = continuity_interior_row(g, D, zero, 3, 5);
  const double e = E(g.r[3], g.theta[5]);
  CHECK(with.center - without.center == Approx(e * (1.0 / (g.r[3] * g.mu_at(6)) + 1.0 / g.h[4])));
  CHECK(with.east - without.east == Approx(-e / g.h[4]));
  CHECK(with.north - without.north == Approx(-e / (g.r[3] * g.mu_at(6))));
  CHECK(with.west == without.west);
  CHECK(with.south == without.south);
}

TEST_CASE("continuity divergence-form diffusion on n = r") {
  // the flux r*D*n_r = r^2 is quadratic, so the half-point differences are exact
  const SpatialFn D = [](double r, double) { return r; };
  for (int m : {19, 39, 79}) {
    const auto g = uniform(m);
    const auto rows = build_rows(g, Family::continuity, CoefficientSet::continuity(D, zero));
    const auto out = apply_operator(rows, sample(g, [](double r, double) { return r; }));
    const int i = (m + 1) / 2;
    REQUIRE(g.r[i] == Approx(0.5));
    CHECK(std::abs(out.at(i, 0) + 2.0) <= 1e-10);
  }
}

TEST_CASE("parabolic rows need a uniform angle") {
  const auto g = build_polar_grid(4, StretchSpec::radial(StretchKind::identity),
                                  StretchSpec::angular(StretchKind::sine_power, 1.5));
  CHECK_THROWS_AS(parabolic_interior_row(g, zero, 1, 0), ConfigurationError);
  CHECK_THROWS_AS(build_rows(g, Family::parabolic, CoefficientSet::parabolic(zero)), ConfigurationError);
}

TEST_CASE("sign pattern of the parabolic operator") {
  const SpatialFn b = [](double r, double) { return std::sqrt(r); };
  for (int m : {5, 50, 200})
    for (auto spec : {StretchSpec::radial(StretchKind::sine_power, 0.5),
                      StretchSpec::radial(StretchKind::sine_power, 4.0),
                      StretchSpec::radial(StretchKind::legacy_power, 0.6),
                      StretchSpec::radial(StretchKind::identity)}) {
      const auto g = build_polar_grid(m, spec, StretchSpec::angular(StretchKind::identity));
      const auto rows = build_rows(g, Family::parabolic, CoefficientSet::parabolic(b));
      bool ok = rows.origin.center > 0 && rows.origin.ring_coefficient < 0;
      for (const auto& s : rows.interior)
        ok = ok && s.center > 0 && s.west < 0 && s.east < 0 && s.south < 0 && s.north < 0;
      CHECK(ok);
    }
}

TEST_CASE("apply_operator basics") {
  const auto g = graded(6, 1.0);
  const auto rows = build_rows(g, Family::parabolic, CoefficientSet::parabolic(zero));
  const auto out = apply_operator(rows, GridField(g));
  CHECK(out == GridField(g));
  CHECK_THROWS_AS(apply_operator(rows, GridField(5, g.n)), std::invalid_argument);
}

TEST_CASE("rotation by one angular index commutes with the operator") {
  const auto g = graded(6, 1.4);
  const auto rows = build_rows(g, Family::parabolic,
                               CoefficientSet::parabolic([](double r, double) { return r; }));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  GridField f(g);
  f.origin() = u(rng);
  for (int j = 0; j < g.n; ++j) {
    for (int i = 1; i <= g.m; ++i) f.at(i, j) = u(rng);
    f.ring(j) = u(rng);
  }
  GridField rot(g);
  rot.origin() = f.origin();
  for (int j = 0; j < g.n; ++j) {
    for (int i = 1; i <= g.m; ++i) rot.at(i, j) = f.at(i, j - 1);
    rot.ring(j) = f.ring(j - 1);
  }
  const auto a = apply_operator(rows, f);
  const auto b = apply_operator(rows, rot);
  for (int j = 0; j < g.n; ++j)
    for (int i = 1; i <= g.m; ++i) CHECK(b.at(i, j) == a.at(i, j - 1));
}

TEST_CASE("consistency order for a smooth radial function") {
  // u = exp(r), -Lap u = -(1 + 1/r) e^r
  auto err_at_half = [](const PolarGrid& g) {
    const auto rows = build_rows(g, Family::parabolic, CoefficientSet::parabolic(zero));
    const auto out = apply_operator(rows, sample(g, [](double r, double) { return std::exp(r); }));
    int best = 1;
    for (int i = 1; i <= g.m; ++i)
      if (std::abs(g.r[i] - 0.5) < std::abs(g.r[best] - 0.5)) best = i;
    const double r = g.r[best];
    return std::abs(out.at(best, 0) + (1.0 + 1.0 / r) * std::exp(r));
  };
  const double u1 = err_at_half(uniform(39)), u2 = err_at_half(uniform(79));
  CHECK(std::log2(u1 / u2) == Approx(2.0).epsilon(0.1));
  const double g1 = err_at_half(graded(39, 1.5)), g2 = err_at_half(graded(79, 1.5));
  CHECK(std::log2(g1 / g2) >= 1.0);
}

TEST_CASE("operator applied to the P1 solution matches f - u_t") {
  const auto p = experiment_P1();
  double prev = 1e9;
  for (int m : {19, 39, 79}) {
    const auto g = uniform(m);
    const auto rows = build_rows(g, p.family, p.coefficients);
    const auto out = apply_operator(rows, sample(g, [&](double r, double th) { return (*p.exact)(0.0, r, th); }));
    const int i = (m + 1) / 2;
    const double r = g.r[i];
    const double u_t = -r * r;  // d/dt e^{-t} r^2 at t=0
    const double err = std::abs(out.at(i, 0) - (p.source(0.0, r, 0.0) - u_t));
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-3);
}
