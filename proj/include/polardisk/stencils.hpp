#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polardisk/field.hpp"
#include "polardisk/mesh.hpp"

namespace polardisk {

enum class Family { parabolic, continuity };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

using SpatialFn = std::function<double(double r, double theta)>;

/// Coefficients of the spatial operator.  The parabolic family reads b only,
/// the continuity family reads the diffusion D and the combined drift E.
struct CoefficientSet {
  SpatialFn b;
  SpatialFn D;
  SpatialFn E;

  static CoefficientSet parabolic(SpatialFn b);
  static CoefficientSet continuity(SpatialFn D, SpatialFn E);
};

/// Signed matrix entries of one discrete operator row.
///
/// For i = 1 the west neighbour is the origin, so `west` also appears as
/// `origin_link`.  For i = m the east neighbour is the Dirichlet ring.
/// The origin row only uses `center` and `ring_coefficient` (the weight on
/// every first-ring value U_{1,j}).
struct StencilRow {
  double center = 0.0;
  double west = 0.0;
  double east = 0.0;
  double south = 0.0;
  double north = 0.0;
  double origin_link = 0.0;
  bool is_origin_row = false;
  double ring_coefficient = 0.0;
};

class ConfigurationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

StencilRow parabolic_interior_row(const PolarGrid& grid, const SpatialFn& b, int i, int j);
StencilRow parabolic_origin_row(const PolarGrid& grid, const SpatialFn& b);
StencilRow continuity_interior_row(const PolarGrid& grid, const SpatialFn& D, const SpatialFn& E,
                                   int i, int j);
StencilRow continuity_origin_row(const PolarGrid& grid, const SpatialFn& D, const SpatialFn& E);

/// Angular mean of f(0, theta_j) over the n grid angles.
double origin_mean(const PolarGrid& grid, const SpatialFn& f);

/// All rows of one operator; interior rows are stored in GlobalOrdering.
struct OperatorRows {
  int m = 0;
  int n = 0;
  Family family = Family::parabolic;
  StencilRow origin;
  std::vector<StencilRow> interior;

  const StencilRow& row(int i, int j) const { return interior[GlobalOrdering{m, n}.index(i, j) - 1]; }
};

OperatorRows build_rows(const PolarGrid& grid, Family family, const CoefficientSet& coeffs);

/// Matrix-free application.  The output ring is zero; the input ring enters
/// through the east entries of the i = m rows.
GridField apply_operator(const OperatorRows& rows, const GridField& field);

}  // namespace polardisk
