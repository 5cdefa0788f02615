#include "polardisk/stepper.hpp"

#include <algorithm>
#include <bit>

namespace polardisk {

StepContext::StepContext(const ProblemSpec& problem, const PolarGrid& grid, const TimeGrid& time,
                         double a, SolverOptions solver)
    : problem_(&problem), grid_(&grid), time_(&time), a_(a), solver_(solver),
      op_(assemble_operator(grid, problem.family, problem.coefficients)) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("weight a must lie in (0, 1)");
}

GridField StepContext::source(double t) const {
  const PolarGrid& g = *grid_;
  const ProblemSpec& p = *problem_;
  GridField f(g.m, g.n);
  if (p.family == Family::parabolic) {
    f.origin() = p.source(t, 0.0, g.theta[0]);
  } else {
    f.origin() = origin_mean(g, [&](double r, double th) { return p.source(t, r, th); });
  }
  for (int j = 0; j < g.n; ++j)
    for (int i = 1; i <= g.m; ++i) f.at(i, j) = p.source(t, g.r[i], g.theta[j]);
  return f;
}

std::vector<double> StepContext::boundary(double t) const {
  std::vector<double> g(static_cast<std::size_t>(grid_->n));
  for (int j = 0; j < grid_->n; ++j) g[j] = problem_->boundary(t, grid_->theta[j]);
  return g;
}

StepContext::Cached& StepContext::entry(double dt) {
  const auto key = std::bit_cast<std::uint64_t>(dt);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  StepSystem sys = build_step_system(op_, a_, dt);
  Factorization fact =
      Factorization::factorize(sys.implicit_matrix, solver_, Fingerprint{grid_->id(), a_, dt});
  return cache_.emplace(key, Cached{std::move(sys), std::move(fact)}).first->second;
}

const StepSystem& StepContext::system(double dt) { return entry(dt).system; }
const Factorization& StepContext::factorization(double dt) { return entry(dt).fact; }

GridField initialize(const ProblemSpec& problem, const PolarGrid& grid) {
  GridField u(grid.m, grid.n);
  u.origin() = problem.initial(0.0, grid.theta[0]);
  for (int j = 0; j < grid.n; ++j) {
    for (int i = 1; i <= grid.m; ++i) u.at(i, j) = problem.initial(grid.r[i], grid.theta[j]);
    u.ring(j) = problem.boundary(0.0, grid.theta[j]);
  }
  return u;
}

StepOutcome step(const GridField& state_k, int k, StepContext& ctx) {
  const TimeGrid& tg = ctx.time();
  if (k < 0 || k >= tg.K) throw std::out_of_range("step index outside the time grid");
  const double t0 = tg.t[k];
  const double t1 = tg.t[k + 1];
  const double dt = tg.dt[k];
  try {
    const StepSystem& sys = ctx.system(dt);
    const Factorization& fact = ctx.factorization(dt);
    const std::vector<double> g0 = ctx.boundary(t0);
    const std::vector<double> g1 = ctx.boundary(t1);
    const Vector rhs = build_rhs(sys, state_k, ctx.source(t0), ctx.source(t1), g0, g1);
    const Vector x = fact.solve(rhs);
    const double res = fact.scaled_residual(x, rhs);
    if (!(res <= ctx.residual_tolerance()))
      throw SolverError("scaled residual " + std::to_string(res) + " above tolerance");
    StepOutcome out;
    out.state = GridField(state_k.m(), state_k.n());
    out.state.set_unknowns(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
    for (int j = 0; j < state_k.n(); ++j) out.state.ring(j) = g1[j];
    out.residual = res;
    return out;
  } catch (const StepError&) {
    throw;
  } catch (const SolverError& e) {
    throw StepError(k, e.what(), e.pivot());
  }
}

MarchResult march(const ProblemSpec& problem, const PolarGrid& grid, const TimeGrid& time, double a,
                  const std::vector<int>& snapshot_steps, SolverOptions solver) {
  StepContext ctx(problem, grid, time, a, solver);
  MarchResult out;
  GridField u = initialize(problem, grid);
  auto wanted = [&](int k) {
    return std::find(snapshot_steps.begin(), snapshot_steps.end(), k) != snapshot_steps.end();
  };
  if (wanted(0)) out.snapshots.emplace(0, u);
  out.residuals.reserve(static_cast<std::size_t>(time.K));
  for (int k = 0; k < time.K; ++k) {
    StepOutcome s = step(u, k, ctx);
    u = std::move(s.state);
    out.residuals.push_back(s.residual);
    if (wanted(k + 1)) out.snapshots.emplace(k + 1, u);
  }
  out.final = std::move(u);
  out.factorizations = ctx.factorizations();
  return out;
}

}  // namespace polardisk
