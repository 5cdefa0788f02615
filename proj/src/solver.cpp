#include "polardisk/solver.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <cmath>
#include <regex>

namespace polardisk {

std::string to_string(SolverKind k) { return k == SolverKind::direct ? "direct" : "iterative"; }

SolverKind solver_kind_from_string(const std::string& s) {
  if (s == "direct") return SolverKind::direct;
  if (s == "iterative") return SolverKind::iterative;
  throw std::invalid_argument("unknown solver kind '" + s + "'");
}

using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;

struct Factorization::Impl {
  SparseMatrix A;
  double norm_inf = 0.0;
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
  Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<double>> krylov;
};

namespace {

double row_norm_inf(const SparseMatrix& A) {
  double best = 0.0;
  for (Eigen::Index row = 0; row < A.outerSize(); ++row) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(A, row); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

std::optional<long> pivot_from_message(const std::string& msg) {
  std::smatch match;
  static const std::regex number(R"((\d+))");
  if (std::regex_search(msg, match, number)) return std::stol(match[1]);
  return std::nullopt;
}

}  // namespace

Factorization Factorization::factorize(const SparseMatrix& A, const SolverOptions& options,
                                       Fingerprint fingerprint) {
  if (A.rows() != A.cols()) throw SolverError("matrix is not square");
  auto impl = std::make_shared<Impl>();
  impl->A = A;
  impl->A.makeCompressed();
  impl->norm_inf = row_norm_inf(impl->A);

  if (options.kind == SolverKind::direct) {
    ColMatrix C = impl->A;
    C.makeCompressed();
    impl->lu.analyzePattern(C);
    impl->lu.factorize(C);
    if (impl->lu.info() != Eigen::Success) {
      const std::string msg = impl->lu.lastErrorMessage();
      throw SolverError("sparse LU failed: " + msg, pivot_from_message(msg));
    }
    // exact zero pivots surface above; tiny ones show up here
    const double logdet = impl->lu.logAbsDeterminant();
    if (!std::isfinite(logdet)) throw SolverError("sparse LU produced a singular factor");
  } else {
    impl->krylov.setTolerance(options.tolerance);
    impl->krylov.setMaxIterations(options.max_iterations);
    impl->krylov.preconditioner().setDroptol(1e-6);
    impl->krylov.compute(impl->A);
    if (impl->krylov.info() != Eigen::Success)
      throw SolverError("incomplete LU preconditioner failed");
  }

  Factorization f;
  f.impl_ = std::move(impl);
  f.options_ = options;
  f.fingerprint_ = fingerprint;
  return f;
}

std::size_t Factorization::size() const {
  return impl_ ? static_cast<std::size_t>(impl_->A.rows()) : 0;
}

Vector Factorization::solve(const Vector& b) const {
  if (!impl_) throw SolverError("solve called on an empty factorization");
  if (b.size() != impl_->A.rows()) throw SolverError("right-hand side has the wrong length");
  Vector x;
  if (options_.kind == SolverKind::direct) {
    x = impl_->lu.solve(b);
    if (impl_->lu.info() != Eigen::Success) throw SolverError("sparse LU solve failed");
  } else {
    x = impl_->krylov.solve(b);
    if (impl_->krylov.info() != Eigen::Success)
      throw SolverError("BiCGSTAB did not converge, estimated error " +
                        std::to_string(impl_->krylov.error()));
  }
  if (!x.allFinite()) throw SolverError("solution contains non-finite entries");
  return x;
}

double Factorization::scaled_residual(const Vector& x, const Vector& b) const {
  const Vector r = impl_->A * x - b;
  const double denom = impl_->norm_inf * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  const double num = r.lpNorm<Eigen::Infinity>();
  return denom > 0.0 ? num / denom : num;
}

}  // namespace polardisk
