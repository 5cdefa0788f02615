#include "polardisk/reference.hpp"

#include <numbers>

namespace polardisk {

DenseOperator dense_reference_operator(const PolarGrid& grid, Family family,
                                       const CoefficientSet& c) {
  const int m = grid.m;
  const int n = grid.n;
  const int N = m * n + 1;
  const double two_pi = 2.0 * std::numbers::pi;
  auto col = [&](int i, int j) { return i == 0 ? 0 : 1 + ((j + n) % n) * m + (i - 1); };
  auto angle = [&](int j) {
    // theta_j continued periodically beyond [0, n)
    if (j < 0) return grid.theta[j + n] - two_pi;
    if (j >= n) return grid.theta[j - n] + two_pi;
    return grid.theta[j];
  };

  DenseOperator out;
  out.matrix = Eigen::MatrixXd::Zero(N, N);
  out.boundary_weight = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd& A = out.matrix;

  const double h1 = grid.r[1];
  if (family == Family::parabolic) {
    A(0, 0) = 4.0 / (h1 * h1) + c.b(0.0, grid.theta[0]);
    for (int j = 0; j < n; ++j) A(0, col(1, j)) += -4.0 / (n * h1 * h1);
  } else {
    double D0 = 0.0, E0 = 0.0;
    for (int j = 0; j < n; ++j) {
      D0 += c.D(0.0, grid.theta[j]) / n;
      E0 += c.E(0.0, grid.theta[j]) / n;
    }
    A(0, 0) = 4.0 * D0 / (h1 * h1) + E0 / h1;
    for (int j = 0; j < n; ++j) A(0, col(1, j)) += -(4.0 * D0 / (n * h1 * h1) - E0 / (n * h1));
  }

  for (int j = 0; j < n; ++j) {
    for (int i = 1; i <= m; ++i) {
      const double r = grid.r[i];
      const double rw = grid.r[i - 1];
      const double re = grid.r[i + 1];
      const double hi = r - rw;
      const double hi1 = re - r;
      const double rm = 0.5 * (r + rw);
      const double rp = 0.5 * (r + re);
      const double th = angle(j);
      const double muj = th - angle(j - 1);
      const double muj1 = angle(j + 1) - th;
      const int row = col(i, j);

      double diag, west, east, south, north;
      if (family == Family::parabolic) {
        const double mu = two_pi / n;
        west = 2.0 * rm / (r * hi * (hi + hi1));
        east = 2.0 * rp / (r * hi1 * (hi + hi1));
        south = north = 1.0 / (r * r * mu * mu);
        diag = 2.0 / (r * (hi + hi1)) * (rp / hi1 + rm / hi) + 2.0 / (r * r * mu * mu) + c.b(r, th);
      } else {
        const double Dm = c.D(rm, th);
        const double Dp = c.D(rp, th);
        const double Ds = c.D(r, 0.5 * (th + angle(j - 1)));
        const double Dn = c.D(r, 0.5 * (th + angle(j + 1)));
        const double E = c.E(r, th);
        west = 2.0 * rm * Dm / (r * hi * (hi + hi1));
        east = 2.0 * rp * Dp / (r * hi1 * (hi + hi1)) + E / hi1;
        south = 2.0 * Ds / (r * r * muj * (muj + muj1));
        north = 2.0 * Dn / (r * r * muj1 * (muj + muj1)) + E / (r * muj1);
        diag = 2.0 / (r * (hi + hi1)) * (rp * Dp / hi1 + rm * Dm / hi) +
               2.0 / (r * r * (muj + muj1)) * (Dn / muj1 + Ds / muj) + E * (1.0 / (r * muj1) + 1.0 / hi1);
      }
      A(row, row) += diag;
      A(row, col(i - 1, j)) -= west;
      if (i < m)
        A(row, col(i + 1, j)) -= east;
      else
        out.boundary_weight[j] = east;
      A(row, col(i, j - 1)) -= south;
      A(row, col(i, j + 1)) -= north;
    }
  }
  return out;
}

}  // namespace polardisk
