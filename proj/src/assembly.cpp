#include "polardisk/assembly.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace polardisk {

SparseOperator assemble_operator(const OperatorRows& rows) {
  const int m = rows.m;
  const int n = rows.n;
  const GlobalOrdering ord{m, n};
  const auto N = static_cast<Eigen::Index>(ord.size());

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(expected_nonzeros(m, n));
  trips.emplace_back(0, 0, rows.origin.center);
  for (int j = 0; j < n; ++j)
    trips.emplace_back(0, static_cast<Eigen::Index>(ord.index(1, j)), rows.origin.ring_coefficient);

  SparseOperator op;
  op.m = m;
  op.n = n;
  op.family = rows.family;
  op.boundary_weight.assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    for (int i = 1; i <= m; ++i) {
      const StencilRow& s = rows.row(i, j);
      const auto k = static_cast<Eigen::Index>(ord.index(i, j));
      trips.emplace_back(k, k, s.center);
      trips.emplace_back(k, i == 1 ? 0 : static_cast<Eigen::Index>(ord.index(i - 1, j)), s.west);
      if (i < m)
        trips.emplace_back(k, static_cast<Eigen::Index>(ord.index(i + 1, j)), s.east);
      else
        op.boundary_weight[j] = -s.east;
      trips.emplace_back(k, static_cast<Eigen::Index>(ord.index(i, j - 1)), s.south);
      trips.emplace_back(k, static_cast<Eigen::Index>(ord.index(i, j + 1)), s.north);
    }
  }
  op.matrix.resize(N, N);
  op.matrix.setFromTriplets(trips.begin(), trips.end());
  op.matrix.makeCompressed();
  return op;
}

SparseOperator assemble_operator(const PolarGrid& grid, Family family, const CoefficientSet& coeffs) {
  return assemble_operator(build_rows(grid, family, coeffs));
}

std::size_t expected_nonzeros(int m, int n) {
  // n >= 3 keeps the south and north columns distinct
  const auto mn = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
  return 5 * mn + 1;
}

StepSystem build_step_system(const SparseOperator& L, double a, double dt) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("weight a must lie in (0, 1)");
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  SparseMatrix I(L.matrix.rows(), L.matrix.cols());
  I.setIdentity();
  StepSystem sys;
  sys.a = a;
  sys.dt = dt;
  sys.m = L.m;
  sys.n = L.n;
  sys.implicit_matrix = I + ((1.0 - a) * dt) * L.matrix;
  sys.explicit_matrix = I - (a * dt) * L.matrix;
  sys.implicit_matrix.makeCompressed();
  sys.explicit_matrix.makeCompressed();
  sys.boundary_weight = L.boundary_weight;
  return sys;
}

Vector build_rhs(const StepSystem& sys, const GridField& state_k, const GridField& source_k,
                 const GridField& source_k1, std::span<const double> boundary_k,
                 std::span<const double> boundary_k1) {
  if (state_k.m() != sys.m || state_k.n() != sys.n || !state_k.same_shape(source_k) ||
      !state_k.same_shape(source_k1))
    throw std::invalid_argument("build_rhs: fields do not match the system");
  if (boundary_k.size() != static_cast<std::size_t>(sys.n) ||
      boundary_k1.size() != static_cast<std::size_t>(sys.n))
    throw std::invalid_argument("build_rhs: boundary data has the wrong length");

  const std::vector<double> xk = state_k.unknowns();
  const std::vector<double> fk = source_k.unknowns();
  const std::vector<double> fk1 = source_k1.unknowns();
  const auto N = static_cast<Eigen::Index>(xk.size());
  const Eigen::Map<const Vector> x(xk.data(), N);
  const Eigen::Map<const Vector> f0(fk.data(), N);
  const Eigen::Map<const Vector> f1(fk1.data(), N);

  const double a = sys.a;
  const double dt = sys.dt;
  Vector rhs = sys.explicit_matrix * x + dt * (a * f0 + (1.0 - a) * f1);
  const GlobalOrdering ord{sys.m, sys.n};
  for (int j = 0; j < sys.n; ++j) {
    const auto k = static_cast<Eigen::Index>(ord.index(sys.m, j));
    rhs[k] += dt * sys.boundary_weight[j] * (a * boundary_k[j] + (1.0 - a) * boundary_k1[j]);
  }
  return rhs;
}

namespace {

std::vector<char> reachable(const SparseMatrix& A, bool transpose) {
  const auto N = static_cast<std::size_t>(A.rows());
  std::vector<std::vector<std::size_t>> adj(N);
  for (Eigen::Index row = 0; row < A.outerSize(); ++row)
    for (SparseMatrix::InnerIterator it(A, row); it; ++it) {
      if (it.col() == row || it.value() == 0.0) continue;
      const auto from = static_cast<std::size_t>(transpose ? it.col() : row);
      const auto to = static_cast<std::size_t>(transpose ? row : it.col());
      adj[from].push_back(to);
    }
  std::vector<char> seen(N, 0);
  if (N == 0) return seen;
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        stack.push_back(w);
      }
  }
  return seen;
}

}  // namespace

MMatrixReport verify_m_matrix(const SparseMatrix& A, double relative_tolerance) {
  MMatrixReport report;
  if (A.rows() != A.cols()) {
    report.sign_ok = report.diag_dominance_ok = report.irreducibility_ok = false;
    return report;
  }
  for (Eigen::Index row = 0; row < A.outerSize(); ++row) {
    double diag = 0.0;
    double off = 0.0;
    bool sign_bad = false;
    for (SparseMatrix::InnerIterator it(A, row); it; ++it) {
      if (it.col() == row) {
        diag += it.value();
      } else {
        if (it.value() > 0.0) sign_bad = true;
        off += std::abs(it.value());
      }
    }
    if (!(diag > 0.0)) sign_bad = true;
    if (sign_bad) {
      report.sign_ok = false;
      report.sign_violations.push_back(static_cast<std::size_t>(row));
    }
    if (diag < off - relative_tolerance * std::max(std::abs(diag), off)) {
      report.diag_dominance_ok = false;
      report.dominance_violations.push_back(static_cast<std::size_t>(row));
    }
  }
  const auto fwd = reachable(A, false);
  const auto bwd = reachable(A, true);
  for (std::size_t v = 0; v < fwd.size(); ++v)
    if (!fwd[v] || !bwd[v]) {
      report.irreducibility_ok = false;
      break;
    }
  return report;
}

void write_matrix_market(std::ostream& out, const SparseMatrix& A) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.rows() << ' ' << A.cols() << ' ' << A.nonZeros() << '\n';
  char buf[64];
  for (Eigen::Index row = 0; row < A.outerSize(); ++row)
    for (SparseMatrix::InnerIterator it(A, row); it; ++it) {
      std::snprintf(buf, sizeof(buf), "%.17g", it.value());
      out << row + 1 << ' ' << it.col() + 1 << ' ' << buf << '\n';
    }
}

void write_matrix_market(const std::string& path, const SparseMatrix& A) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_matrix_market(out, A);
}

}  // namespace polardisk
