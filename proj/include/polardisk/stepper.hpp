#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "polardisk/assembly.hpp"
#include "polardisk/problems.hpp"
#include "polardisk/solver.hpp"

namespace polardisk {

class StepError : public SolverError {
 public:
  StepError(int step, const std::string& what, std::optional<long> pivot = std::nullopt)
      : SolverError("step " + std::to_string(step) + ": " + what, pivot), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// Everything a step needs.  Factorizations are cached by the exact bits of dt,
/// so a uniform time grid factorizes once.
class StepContext {
 public:
  StepContext(const ProblemSpec& problem, const PolarGrid& grid, const TimeGrid& time, double a,
              SolverOptions solver = {});

  const ProblemSpec& problem() const { return *problem_; }
  const PolarGrid& grid() const { return *grid_; }
  const TimeGrid& time() const { return *time_; }
  double a() const { return a_; }
  const SparseOperator& op() const { return op_; }

  /// Source on the unknowns at time t; the ring entries are zero.
  GridField source(double t) const;
  std::vector<double> boundary(double t) const;

  const StepSystem& system(double dt);
  const Factorization& factorization(double dt);
  int factorizations() const { return static_cast<int>(cache_.size()); }

  double residual_tolerance() const { return solver_.tolerance; }

 private:
  struct Cached {
    StepSystem system;
    Factorization fact;
  };
  Cached& entry(double dt);

  const ProblemSpec* problem_;
  const PolarGrid* grid_;
  const TimeGrid* time_;
  double a_;
  SolverOptions solver_;
  SparseOperator op_;
  std::map<std::uint64_t, Cached> cache_;
};

/// Initial field: u0 at the nodes, the origin from u0(0, theta_0), ring from boundary(0, .).
GridField initialize(const ProblemSpec& problem, const PolarGrid& grid);

struct StepOutcome {
  GridField state;
  double residual = 0.0;
};

/// Advances state_k from t_k to t_{k+1}.
StepOutcome step(const GridField& state_k, int k, StepContext& ctx);

struct MarchResult {
  GridField final;
  std::map<int, GridField> snapshots;
  std::vector<double> residuals;
  int factorizations = 0;
};

MarchResult march(const ProblemSpec& problem, const PolarGrid& grid, const TimeGrid& time, double a,
                  const std::vector<int>& snapshot_steps = {}, SolverOptions solver = {});

}  // namespace polardisk
