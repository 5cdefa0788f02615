#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "polardisk/analysis.hpp"
#include "polardisk/stepper.hpp"

using namespace polardisk;
using doctest::Approx;

namespace {

PolarGrid sine_grid(int m, double p) {
  return build_polar_grid(m, StretchSpec::radial(StretchKind::sine_power, p),
                          StretchSpec::angular(StretchKind::identity));
}

TimeGrid uniform_time(int K, double T) {
  return build_time_grid(K, T, StretchSpec::temporal(StretchKind::identity, 1.0, T));
}

double max_abs_diff(const GridField& a, const GridField& b) {
  const auto x = a.unknowns(), y = b.unknowns();
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) d = std::max(d, std::abs(x[k] - y[k]));
  return d;
}

}  // namespace

TEST_CASE("initial field") {
  const auto p = experiment_P1();
  const auto g = sine_grid(7, 1.0);
  const auto u = initialize(p, g);
  CHECK(u.origin() == p.initial(0.0, g.theta[0]));
  for (int j = 0; j < g.n; ++j) {
    CHECK(u.ring(j) == p.boundary(0.0, g.theta[j]));
    for (int i = 1; i <= g.m; ++i) CHECK(u.at(i, j) == p.initial(g.r[i], g.theta[j]));
  }
}

TEST_CASE("constant states are preserved") {
  for (const auto& p : {constant_state(3.0), constant_continuity(3.0)}) {
    const auto g = sine_grid(11, 1.7);
    const auto res = march(p, g, uniform_time(20, 1.0), 0.3);
    const auto u = res.final.unknowns();
    for (double v : u) CHECK(std::abs(v - 3.0) <= 1e-12);
  }
}

TEST_CASE("one trapezoid step of the spatially constant decay") {
  // u1 = 1 + dt/2 (f0 + f1) with f = -exp(-t), dt = 0.1
  const double u1 = 0.9047581290982021;
  // with ring data on the same scalar sequence the field stays constant
  auto p = constant_decay();
  p.boundary = [u1](double t, double) { return t == 0.0 ? 1.0 : u1; };
  const auto res = march(p, sine_grid(9, 1.0), uniform_time(1, 0.1), 0.5);
  for (double v : res.final.unknowns()) CHECK(v == Approx(u1).epsilon(1e-12));

  // the exact ring exp(-0.1) differs by 8e-5; values stay between the two
  const auto q = constant_decay();
  const auto exact_ring = march(q, sine_grid(9, 1.0), uniform_time(1, 0.1), 0.5);
  for (double v : exact_ring.final.unknowns()) {
    CHECK(v >= u1 - 1e-12);
    CHECK(v <= std::exp(-0.1) + 1e-12);
  }
  CHECK(exact_ring.final.origin() == Approx(u1).epsilon(1e-5));
}

TEST_CASE("frozen P1 run") {
  // independent prototype: m = 19, p = 1, a = 0.4, K = 10, T = 0.1
  const auto p = experiment_P1();
  const auto g = sine_grid(19, 1.0);
  const auto tg = uniform_time(10, 0.1);
  const auto res = march(p, g, tg, 0.4);
  const auto rep = compute_errors(res, p, g, tg.T);
  CHECK(rep.maxerr == Approx(0.011814710226729419).epsilon(1e-9));
  CHECK(rep.meanerr == Approx(0.008337780417076638).epsilon(1e-9));
  CHECK(res.factorizations == 1);
}

TEST_CASE("K = 0 returns the initial field") {
  const auto p = experiment_P1();
  const auto g = sine_grid(5, 1.0);
  const auto res = march(p, g, uniform_time(0, 0.1), 0.5);
  CHECK(res.final == initialize(p, g));
  CHECK(res.residuals.empty());
}

TEST_CASE("march equals repeated step") {
  const auto p = experiment_C1_printed();
  const auto g = build_polar_grid(9, StretchSpec::radial(StretchKind::sine_power, 0.1),
                                  StretchSpec::angular(StretchKind::sine_power, 1.9));
  const auto tg = build_time_grid(6, 0.1, StretchSpec::temporal(StretchKind::sine_power, 1.5, 0.1));
  const auto res = march(p, g, tg, 0.5, {0, 3, 6});
  StepContext ctx(p, g, tg, 0.5);
  GridField u = initialize(p, g);
  for (int k = 0; k < tg.K; ++k) {
    u = step(u, k, ctx).state;
    if (k == 2) CHECK(res.snapshots.at(3) == u);
  }
  CHECK(res.final == u);
  CHECK(res.snapshots.at(0) == initialize(p, g));
  CHECK(res.snapshots.at(6) == u);
  CHECK(res.residuals.size() == 6);
  // a stretched time grid has distinct steps
  CHECK(res.factorizations == 6);
  CHECK_THROWS_AS(step(u, 6, ctx), std::out_of_range);
  CHECK_THROWS_AS(step(u, -1, ctx), std::out_of_range);
}

TEST_CASE("residuals of the direct solve are small") {
  const auto p = experiment_P2();
  const auto g = sine_grid(19, 2.5);
  const auto res = march(p, g, uniform_time(10, p.horizon), 0.4);
  for (double r : res.residuals) CHECK(r <= 1e-12);
}

TEST_CASE("non-finite source raises a step error") {
  auto p = with_source(experiment_P1(), [](double t, double, double) {
    return t > 0.05 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
  }, "-nan");
  const auto g = sine_grid(5, 1.0);
  bool thrown = false;
  try {
    march(p, g, uniform_time(10, 0.1), 0.5);
  } catch (const StepError& e) {
    thrown = true;
    CHECK(e.step() == 5);
  }
  CHECK(thrown);
}

TEST_CASE("temporal order of the decay problem") {
  const auto p = constant_decay();
  const auto g = sine_grid(5, 1.0);
  auto err = [&](int K, double a) {
    const auto tg = uniform_time(K, 1.0);
    return compute_errors(march(p, g, tg, a), p, g, 1.0).maxerr;
  };
  CHECK(std::log2(err(10, 0.5) / err(20, 0.5)) == Approx(2.0).epsilon(0.02));
  CHECK(std::log2(err(20, 0.3) / err(40, 0.3)) == Approx(1.0).epsilon(0.1));
}

TEST_CASE("context caches one factorization per step size") {
  const auto p = experiment_P1();
  const auto g = sine_grid(5, 1.0);
  const auto tg = uniform_time(4, 0.1);
  StepContext ctx(p, g, tg, 0.5);
  const auto& f1 = ctx.factorization(0.025);
  const auto& f2 = ctx.factorization(0.025);
  CHECK(&f1 == &f2);
  ctx.factorization(0.05);
  CHECK(ctx.factorizations() == 2);
  CHECK(ctx.source(0.0).origin() == p.source(0.0, 0.0, g.theta[0]));
  CHECK(ctx.boundary(0.1).size() == static_cast<std::size_t>(g.n));
}
