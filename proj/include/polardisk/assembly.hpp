#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <iosfwd>
#include <string>
#include <vector>

#include "polardisk/stencils.hpp"

namespace polardisk {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Discrete spatial operator in GlobalOrdering with the Dirichlet ring
/// eliminated.  boundary_weight[j] = -east(m, j) is the coupling of row
/// (m, j) to the ring value at angle j.
struct SparseOperator {
  int m = 0;
  int n = 0;
  Family family = Family::parabolic;
  SparseMatrix matrix;
  std::vector<double> boundary_weight;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

SparseOperator assemble_operator(const OperatorRows& rows);
SparseOperator assemble_operator(const PolarGrid& grid, Family family, const CoefficientSet& coeffs);

/// Structural nonzero count predicted for an m x n operator: 5mn + 1.
std::size_t expected_nonzeros(int m, int n);

/// One step of the weighted scheme,
///   (I + (1-a) dt L) U^{k+1} = (I - a dt L) U^k + dt (a f^k + (1-a) f^{k+1}) + ring terms.
struct StepSystem {
  double a = 0.5;
  double dt = 0.0;
  SparseMatrix implicit_matrix;
  SparseMatrix explicit_matrix;
  std::vector<double> boundary_weight;
  int m = 0;
  int n = 0;
};

StepSystem build_step_system(const SparseOperator& L, double a, double dt);

Vector build_rhs(const StepSystem& system, const GridField& state_k, const GridField& source_k,
                 const GridField& source_k1, std::span<const double> boundary_k,
                 std::span<const double> boundary_k1);

struct MMatrixReport {
  bool sign_ok = true;
  bool diag_dominance_ok = true;
  bool irreducibility_ok = true;
  std::vector<std::size_t> sign_violations;
  std::vector<std::size_t> dominance_violations;

  bool ok() const { return sign_ok && diag_dominance_ok && irreducibility_ok; }
};

/// Positive diagonal, nonpositive off-diagonals, weak row diagonal dominance
/// and strong connectivity of the nonzero graph.  Never throws on failure.
MMatrixReport verify_m_matrix(const SparseMatrix& A, double relative_tolerance = 1e-12);

/// Matrix Market coordinate dump, 1-based indices.
void write_matrix_market(std::ostream& out, const SparseMatrix& A);
void write_matrix_market(const std::string& path, const SparseMatrix& A);

}  // namespace polardisk
