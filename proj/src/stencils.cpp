#include "polardisk/stencils.hpp"

#include <numbers>

namespace polardisk {

std::string to_string(Family f) {
  return f == Family::parabolic ? "parabolic" : "continuity";
}

Family family_from_string(const std::string& s) {
  if (s == "parabolic") return Family::parabolic;
  if (s == "continuity") return Family::continuity;
  throw std::invalid_argument("unknown equation family '" + s + "'");
}

CoefficientSet CoefficientSet::parabolic(SpatialFn b) {
  CoefficientSet c;
  c.b = std::move(b);
  return c;
}

CoefficientSet CoefficientSet::continuity(SpatialFn D, SpatialFn E) {
  CoefficientSet c;
  c.D = std::move(D);
  c.E = std::move(E);
  return c;
}

StencilRow parabolic_interior_row(const PolarGrid& grid, const SpatialFn& b, int i, int j) {
  if (!grid.uniform_angle())
    throw ConfigurationError("the parabolic scheme requires a uniform angular grid");
  const double mu = 2.0 * std::numbers::pi / grid.n;
  const double ri = grid.r[i];
  const double hi = grid.h[i];
  const double hi1 = grid.h[i + 1];
  const double rm = grid.r_half[i - 1];
  const double rp = grid.r_half[i];
  const double angular = 1.0 / (ri * ri * mu * mu);
  const double bij = b ? b(ri, grid.theta_at(j)) : 0.0;

  StencilRow row;
  row.center = 2.0 / (ri * (hi + hi1)) * (rp / hi1 + rm / hi) + 2.0 * angular + bij;
  row.west = -2.0 * rm / (ri * hi * (hi + hi1));
  row.east = -2.0 * rp / (ri * hi1 * (hi + hi1));
  row.south = -angular;
  row.north = -angular;
  if (i == 1) row.origin_link = row.west;
  return row;
}

StencilRow parabolic_origin_row(const PolarGrid& grid, const SpatialFn& b) {
  const double h1 = grid.h[1];
  StencilRow row;
  row.is_origin_row = true;
  row.center = 4.0 / (h1 * h1) + (b ? b(0.0, grid.theta[0]) : 0.0);
  row.ring_coefficient = -4.0 / (grid.n * h1 * h1);
  return row;
}

StencilRow continuity_interior_row(const PolarGrid& grid, const SpatialFn& D, const SpatialFn& E,
                                   int i, int j) {
  const double ri = grid.r[i];
  const double hi = grid.h[i];
  const double hi1 = grid.h[i + 1];
  const double rm = grid.r_half[i - 1];
  const double rp = grid.r_half[i];
  const double th = grid.theta_at(j);
  const double muj = grid.mu_at(j);
  const double muj1 = grid.mu_at(j + 1);

  const double d_east = D(rp, th);
  const double d_west = D(rm, th);
  const double d_north = D(ri, th + muj1 / 2.0);
  const double d_south = D(ri, th - muj / 2.0);
  const double e = E(ri, th);

  const double west = 2.0 * rm * d_west / (ri * hi * (hi + hi1));
  const double east = 2.0 * rp * d_east / (ri * hi1 * (hi + hi1));
  const double south = 2.0 * d_south / (ri * ri * muj * (muj + muj1));
  const double north = 2.0 * d_north / (ri * ri * muj1 * (muj + muj1));

  StencilRow row;
  row.center = 2.0 / (ri * (hi + hi1)) * (rp * d_east / hi1 + rm * d_west / hi) +
               2.0 / (ri * ri * (muj + muj1)) * (d_north / muj1 + d_south / muj) +
               e * (1.0 / (ri * muj1) + 1.0 / hi1);
  row.west = -west;
  row.east = -(east + e / hi1);
  row.south = -south;
  row.north = -(north + e / (ri * muj1));
  if (i == 1) row.origin_link = row.west;
  return row;
}

double origin_mean(const PolarGrid& grid, const SpatialFn& f) {
  double sum = 0.0;
  for (int j = 0; j < grid.n; ++j) sum += f(0.0, grid.theta[j]);
  return sum / grid.n;
}

StencilRow continuity_origin_row(const PolarGrid& grid, const SpatialFn& D, const SpatialFn& E) {
  const double h1 = grid.h[1];
  const double d0 = origin_mean(grid, D);
  const double e0 = origin_mean(grid, E);
  StencilRow row;
  row.is_origin_row = true;
  row.center = 4.0 * d0 / (h1 * h1) + e0 / h1;
  row.ring_coefficient = -(4.0 * d0 / (grid.n * h1 * h1) - e0 / (grid.n * h1));
  return row;
}

OperatorRows build_rows(const PolarGrid& grid, Family family, const CoefficientSet& coeffs) {
  OperatorRows rows;
  rows.m = grid.m;
  rows.n = grid.n;
  rows.family = family;
  rows.interior.resize(static_cast<std::size_t>(grid.m) * grid.n);
  const GlobalOrdering ord{grid.m, grid.n};
  if (family == Family::parabolic) {
    rows.origin = parabolic_origin_row(grid, coeffs.b);
    for (int j = 0; j < grid.n; ++j)
      for (int i = 1; i <= grid.m; ++i)
        rows.interior[ord.index(i, j) - 1] = parabolic_interior_row(grid, coeffs.b, i, j);
  } else {
    if (!coeffs.D || !coeffs.E)
      throw ConfigurationError("the continuity family needs both D and E");
    rows.origin = continuity_origin_row(grid, coeffs.D, coeffs.E);
    for (int j = 0; j < grid.n; ++j)
      for (int i = 1; i <= grid.m; ++i)
        rows.interior[ord.index(i, j) - 1] =
            continuity_interior_row(grid, coeffs.D, coeffs.E, i, j);
  }
  return rows;
}

GridField apply_operator(const OperatorRows& rows, const GridField& field) {
  if (field.m() != rows.m || field.n() != rows.n)
    throw std::invalid_argument("apply_operator: field and operator grids differ");
  const int m = rows.m;
  const int n = rows.n;
  GridField out(m, n, 0.0);

  double ring_sum = 0.0;
  for (int j = 0; j < n; ++j) ring_sum += field.at(1, j);
  out.origin() = rows.origin.center * field.origin() + rows.origin.ring_coefficient * ring_sum;

  for (int j = 0; j < n; ++j) {
    for (int i = 1; i <= m; ++i) {
      const StencilRow& s = rows.row(i, j);
      out.at(i, j) = s.center * field.at(i, j) + s.west * field.value(i - 1, j) +
                     s.east * field.value(i + 1, j) + s.south * field.at(i, j - 1) +
                     s.north * field.at(i, j + 1);
    }
  }
  return out;
}

}  // namespace polardisk
