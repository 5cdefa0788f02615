#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "polardisk/solver.hpp"

using namespace polardisk;

namespace {

SparseMatrix identity(int N, double scale = 1.0) {
  SparseMatrix I(N, N);
  for (int k = 0; k < N; ++k) I.insert(k, k) = scale;
  I.makeCompressed();
  return I;
}

SparseMatrix step_matrix(int m, double p, double a, double dt) {
  const auto g = build_polar_grid(m, StretchSpec::radial(StretchKind::sine_power, p),
                                  StretchSpec::angular(StretchKind::identity));
  const auto L = assemble_operator(g, Family::parabolic,
                                   CoefficientSet::parabolic([](double r, double) { return r; }));
  return build_step_system(L, a, dt).implicit_matrix;
}

Vector pattern(Eigen::Index N) {
  Vector v(N);
  for (Eigen::Index k = 0; k < N; ++k) v[k] = std::sin(0.37 * static_cast<double>(k) + 0.1);
  return v;
}

}  // namespace

TEST_CASE("identity and scaled identity") {
  const Vector b = pattern(7);
  CHECK((Factorization::factorize(identity(7)).solve(b) - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((Factorization::factorize(identity(7, 2.0)).solve(b) - b / 2.0).cwiseAbs().maxCoeff() <= 1e-16);
  CHECK(Factorization::factorize(identity(7)).solve(Vector::Zero(7)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("round trip on the 9 unknown step matrix") {
  const auto g = build_polar_grid(2, 4, StretchSpec::radial(StretchKind::identity),
                                  StretchSpec::angular(StretchKind::identity));
  const auto L = assemble_operator(g, Family::parabolic, CoefficientSet::parabolic([](double, double) { return 0.0; }));
  const auto A = build_step_system(L, 0.5, 0.1).implicit_matrix;
  REQUIRE(A.rows() == 9);
  const Vector x = pattern(9);
  const Vector b = A * x;
  const auto f = Factorization::factorize(A);
  const Vector y = f.solve(b);
  CHECK((y - x).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(f.scaled_residual(y, b) <= 1e-14);
  CHECK(f.size() == 9);
  CHECK(f.kind() == SolverKind::direct);
}

TEST_CASE("singular matrix reports the failure") {
  SparseMatrix A(3, 3);
  A.insert(0, 0) = 1.0;
  A.insert(1, 1) = 0.0;
  A.insert(2, 2) = 1.0;
  A.insert(0, 1) = 1.0;
  A.makeCompressed();
  bool thrown = false;
  try {
    Factorization::factorize(A);
  } catch (const SolverError& e) {
    thrown = true;
    CHECK(e.pivot().has_value());
  }
  CHECK(thrown);
  CHECK_THROWS_AS(Factorization::factorize(SparseMatrix(3, 4)), SolverError);
}

TEST_CASE("size mismatch") {
  const auto f = Factorization::factorize(identity(4));
  CHECK_THROWS_AS(f.solve(Vector::Zero(5)), SolverError);
}

TEST_CASE("iterative solver agrees with the direct one") {
  const auto A = step_matrix(19, 1.0, 0.4, 0.01);
  const Vector b = pattern(A.rows());
  const auto d = Factorization::factorize(A);
  SolverOptions it;
  it.kind = SolverKind::iterative;
  it.tolerance = 1e-12;
  const auto i = Factorization::factorize(A, it);
  CHECK(i.kind() == SolverKind::iterative);
  const Vector xd = d.solve(b), xi = i.solve(b);
  CHECK((xd - xi).cwiseAbs().maxCoeff() <= 1e-9 * xd.cwiseAbs().maxCoeff());
  CHECK(i.scaled_residual(xi, b) <= 1e-10);
}

TEST_CASE("repeated solves are deterministic") {
  const auto A = step_matrix(19, 2.5, 0.4, 1e-6);
  const Vector b = pattern(A.rows());
  const Vector x1 = Factorization::factorize(A).solve(b);
  const Vector x2 = Factorization::factorize(A).solve(b);
  CHECK(x1 == x2);
}

TEST_CASE("one factorization shared across threads") {
  const auto A = step_matrix(15, 1.0, 0.5, 0.01);
  const auto f = Factorization::factorize(A, {}, Fingerprint{42, 0.5, 0.01});
  CHECK(f.fingerprint() == Fingerprint{42, 0.5, 0.01});
  const Vector b = pattern(A.rows());
  const Vector ref = f.solve(b);
  std::vector<Vector> out(8);
  std::vector<std::thread> pool;
  for (int t = 0; t < 8; ++t) pool.emplace_back([&, t] { out[t] = f.solve(b); });
  for (auto& th : pool) th.join();
  for (const auto& x : out) CHECK(x == ref);
}

TEST_CASE("solver kind strings") {
  CHECK(to_string(SolverKind::direct) == "direct");
  CHECK(solver_kind_from_string("iterative") == SolverKind::iterative);
  CHECK_THROWS(solver_kind_from_string("cg"));
}
