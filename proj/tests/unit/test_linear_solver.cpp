#include <random>

#include <gtest/gtest.h>

#include "glcn/error.hpp"
#include "glcn/linear_solver.hpp"

using namespace glcn;

namespace {

// 2D five-point Laplacian plus a shift, a standard well-posed test matrix.
Eigen::SparseMatrix<double> laplacian(int m, double shift) {
  std::vector<Eigen::Triplet<double>> t;
  auto id = [m](int i, int j) { return i * m + j; };
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      t.emplace_back(id(i, j), id(i, j), 4.0 + shift);
      if (i > 0) t.emplace_back(id(i, j), id(i - 1, j), -1.0);
      if (i + 1 < m) t.emplace_back(id(i, j), id(i + 1, j), -1.0);
      if (j > 0) t.emplace_back(id(i, j), id(i, j - 1), -1.0);
      if (j + 1 < m) t.emplace_back(id(i, j), id(i, j + 1), -1.0);
    }
  }
  Eigen::SparseMatrix<double> a(m * m, m * m);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

}  // namespace

TEST(LinearSolver, KindStrings) {
  using Kind = LinearSolverConfig::Kind;
  EXPECT_EQ(linear_solver_kind_from_string(to_string(Kind::direct)), Kind::direct);
  EXPECT_EQ(linear_solver_kind_from_string(to_string(Kind::iterative)), Kind::iterative);
  EXPECT_THROW(linear_solver_kind_from_string("cg"), InvalidArgument);
}

TEST(LinearSolver, DirectMeetsResidualContract) {
  const auto a = laplacian(20, 0.0);
  SparseDirectSolver solver(1e-12);
  solver.factorize(a);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(a.rows());
  const Eigen::VectorXd x = solver.solve(b);
  EXPECT_LE((b - a * x).norm(), 1e-12 * b.norm());
  // Same pattern, new values: the analysis is reused.
  solver.factorize(2.0 * a);
  EXPECT_LE((b - 2.0 * a * solver.solve(b)).norm(), 1e-12 * b.norm());
}

TEST(LinearSolver, SingularMatrixFails) {
  Eigen::SparseMatrix<double> a(3, 3);
  a.insert(0, 0) = 1.0;
  a.insert(1, 1) = 1.0;
  a.insert(2, 2) = 0.0;
  SparseDirectSolver solver;
  EXPECT_THROW(solver.factorize(a), LinearSolveFailed);
}

TEST(LinearSolver, ComplexDirect) {
  const Eigen::SparseMatrix<std::complex<double>> a =
      laplacian(10, 1.0).cast<std::complex<double>>() *
      std::complex<double>{1.0, 1.0};
  ComplexDirectSolver solver;
  solver.factorize(a);
  const Eigen::VectorXcd b = Eigen::VectorXcd::Random(a.rows());
  EXPECT_LE((b - a * solver.solve(b)).norm(), 1e-12 * b.norm());
}

TEST(LinearSolver, GmresWithExactPreconditionerConvergesAtOnce) {
  const auto a = laplacian(12, 0.5);
  SparseDirectSolver lu;
  lu.factorize(a);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(a.rows());
  const KrylovResult r = gmres([&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return a * v; },
                               [&](const Eigen::VectorXd& v) { return lu.solve_raw(v); }, b,
                               Eigen::VectorXd::Zero(b.size()), 1e-12, 50);
  EXPECT_LE(r.iterations, 3);
  EXPECT_LE((b - a * r.x).norm(), 1e-12 * b.norm());
}

TEST(LinearSolver, GmresUnpreconditionedAndRestarted) {
  const auto a = laplacian(10, 1.0);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(a.rows());
  auto apply = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return a * v; };
  auto identity = [](const Eigen::VectorXd& v) { return v; };
  const KrylovResult r =
      gmres(apply, identity, b, Eigen::VectorXd::Zero(b.size()), 1e-12, 500, 10);
  EXPECT_LE((b - a * r.x).norm(), 1e-12 * b.norm());
  EXPECT_THROW(gmres(apply, identity, b, Eigen::VectorXd::Zero(b.size()), 1e-12, 3, 10),
               LinearSolveFailed);
}
