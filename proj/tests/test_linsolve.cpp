#include "mife/mife.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mife;

namespace {

SparseMatrix from_dense(const Eigen::MatrixXd& D) { return D.sparseView(); }

SparseMatrix random_sparse(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Triplet> T;
  for (Index i = 0; i < n; ++i) {
    T.emplace_back(i, i, 4.0 + u(rng));
    for (int k = 0; k < 3; ++k) {
      const Index j = Index((u(rng) + 1.0) * 0.5 * double(n - 1));
      T.emplace_back(i, j, u(rng));
    }
  }
  SparseMatrix A(n, n);
  A.setFromTriplets(T.begin(), T.end());
  return A;
}

}  // namespace

TEST(Linsolve, ConditionNumberOfSimpleMatrices) {
  EXPECT_NEAR(condition_number(from_dense(Eigen::MatrixXd::Identity(5, 5))).kappa, 1.0, 1e-14);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(2, 2);
  D(0, 0) = 1.0;
  D(1, 1) = 10.0;
  EXPECT_NEAR(condition_number(from_dense(D)).kappa, 10.0, 1e-12);
  D(1, 1) = -10.0;
  EXPECT_NEAR(condition_number(from_dense(D)).kappa, 10.0, 1e-12);
}

TEST(Linsolve, IterativeConditionEstimateAgreesWithDense) {
  const SparseMatrix A = random_sparse(300, 4);
  const auto dense = condition_number(A);
  const auto iterative = condition_number(A, 20000, 0);
  EXPECT_TRUE(dense.dense);
  EXPECT_FALSE(iterative.dense);
  EXPECT_NEAR(iterative.kappa / dense.kappa, 1.0, 0.02);
}

TEST(Linsolve, IterativeEstimateOnStokesSystem) {
  const auto P = problems::ex1_case_a();
  const auto D = discretize(P, 6, default_parameters(P));
  const SparseSystem sys = assemble(D);
  std::vector<Index> idx = free_dofs(sys);
  idx.push_back(sys.multiplier());
  const SparseMatrix B = restrict_matrix(sys.A, idx);
  const double dense = condition_number(B).kappa;
  const double iterative = condition_number(B, 20000, 0).kappa;
  EXPECT_NEAR(iterative / dense, 1.0, 0.05);
  EXPECT_DOUBLE_EQ(system_condition_number(sys).kappa, dense);
}

TEST(Linsolve, SolvesGeneralSparseSystems) {
  const SparseMatrix A = random_sparse(200, 9);
  Eigen::VectorXd x(200);
  for (Index i = 0; i < 200; ++i) x[i] = std::cos(double(i));
  const Eigen::VectorXd b = A * x;
  const auto s = solve(A, b);
  EXPECT_LT((s.x - x).norm() / x.norm(), 1e-12);
  EXPECT_LT(s.residual, 1e-14);
  EXPECT_GT(s.pivot_ratio, 0.0);
}

TEST(Linsolve, RejectsSingularAndNonFiniteMatrices) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Identity(3, 3);
  D.row(2) = D.row(0);
  EXPECT_THROW(solve(from_dense(D), Eigen::VectorXd::Ones(3)), SingularSystem);
  Eigen::MatrixXd N = Eigen::MatrixXd::Identity(3, 3);
  N(1, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(solve(from_dense(N), Eigen::VectorXd::Ones(3)), NonFiniteEntry);
  EXPECT_THROW(solve(from_dense(Eigen::MatrixXd::Identity(3, 3)), Eigen::VectorXd::Ones(4)),
               InvalidArgument);
}

TEST(Linsolve, BorderedStokesSolveMatchesDirectFactorization) {
  for (Method method : {Method::ife, Method::conventional_mini}) {
    const auto P = problems::ex2();
    const auto D = discretize(P, 8, default_parameters(P, method));
    const SparseSystem sys = assemble(D);
    const auto s = solve(sys);
    const auto reference = solve(sys.A, sys.b);
    EXPECT_LT(s.residual, 1e-12);
    EXPECT_LT((s.x - reference.x).norm() / reference.x.norm(), 1e-9);
    // The pressure-mean constraint holds.
    EXPECT_NEAR((sys.A * s.x - sys.b)[sys.multiplier()], 0.0, 1e-12);
  }
}

TEST(Linsolve, RestrictMatrixKeepsSelectedBlock) {
  Eigen::MatrixXd D(3, 3);
  D << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const Eigen::MatrixXd R(restrict_matrix(from_dense(D), {0, 2}));
  Eigen::MatrixXd expected(2, 2);
  expected << 1, 3, 7, 9;
  EXPECT_EQ(R, expected);
}
