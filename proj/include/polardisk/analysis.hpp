#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "polardisk/config.hpp"
#include "polardisk/stepper.hpp"

namespace polardisk {

/// Errors at the final time over the unknowns (origin once, ring excluded).
/// The off_origin variants skip the origin unknown.
struct ErrorReport {
  double maxerr = 0.0;
  double meanerr = 0.0;
  double maxerr_off_origin = 0.0;
  double meanerr_off_origin = 0.0;
  double origin_error = 0.0;
  GridField error_field;
  std::string params;  // JSON echo of the run configuration
};

ErrorReport compute_errors(const MarchResult& result, const ProblemSpec& problem,
                           const PolarGrid& grid, double t_final);
ErrorReport compute_errors(const GridField& state, const ProblemSpec& problem,
                           const PolarGrid& grid, double t_final);

/// maxerr / (h^alpha + dt).
double ratio_diagnostic(double maxerr, double h, double alpha, double dt);

/// Least-squares slope of log(err) against log(x).  x is h for spatial
/// orders and dt for temporal ones; the sign convention makes err ~ x^s give s.
double convergence_order(const std::vector<std::pair<double, double>>& pairs);

struct SweepRow {
  std::size_t index = 0;
  RunConfig config;
  int n = 0;
  int K = 0;
  double T = 0.0;
  double dt = 0.0;  // T / K, the parameter-space step
  double a = 0.0;   // effective weight
  double maxerr = 0.0;
  double meanerr = 0.0;
  double maxerr_off_origin = 0.0;
  double meanerr_off_origin = 0.0;
  double ratio = 0.0;
  int factorizations = 0;
  double max_residual = 0.0;
  double wall_time = 0.0;
  std::string error;  // empty when the run succeeded

  bool ok() const { return error.empty(); }
};

struct RunOutcome {
  SweepRow row;
  ErrorReport report;
  PolarGrid grid;
};

/// One complete pipeline: grids, march, errors.  Solver failures propagate.
RunOutcome execute_run(const RunConfig& cfg);

/// Runs every plan point on `workers` threads.  Failures are recorded in the
/// row; rows come back in plan order.
std::vector<SweepRow> run_sweep(const std::vector<RunConfig>& plan, int workers);

enum class TableLayout { table_2_1, table_2_2, table_3_1, table_3_2, generic };

TableLayout table_layout_from_string(const std::string& s);
std::string to_string(TableLayout t);

struct TableOptions {
  std::vector<int> ms{19, 39, 59, 79, 99};
  /// Table 2.1 only: a fixed step overrides the dt = h policy.
  std::optional<double> dt;
};

/// The mode matrix of a published table.  Each config's label names its column.
std::vector<RunConfig> table_plan(TableLayout layout, const TableOptions& options = {});

/// CSV document with a header row and 9 significant digits.  Absent modes give empty cells.
std::string emit_table(const std::vector<SweepRow>& rows, TableLayout layout,
                       bool include_wall_time = false);

std::string format_number(double v);
std::string csv_escape(const std::string& s);

/// Columns r, theta, abs_error over the unknowns.
void write_error_field(std::ostream& out, const ErrorReport& report, const PolarGrid& grid);

}  // namespace polardisk
