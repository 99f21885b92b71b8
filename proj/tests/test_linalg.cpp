#include "support.hpp"

#include <gtest/gtest.h>

using namespace homspace;

TEST(RankDecision, ReportsGapBetweenRetainedAndDiscarded) {
  Vector s(3);
  s << 2.0, 1.0, 1e-14;
  RankReport r = rank_decision(s, kRankCutoff);
  EXPECT_EQ(r.rank, 2);
  EXPECT_DOUBLE_EQ(r.smallest_retained, 1.0);
  EXPECT_DOUBLE_EQ(r.largest_discarded, 1e-14);
  EXPECT_NEAR(r.gap, 1e14, 1e2);
}

TEST(RankDecision, CutoffIsRelativeToLargest) {
  Vector s(2);
  s << 1e6, 1e-5;
  EXPECT_EQ(rank_decision(s, kRankCutoff).rank, 1);
  s << 1.0, 1e-5;
  EXPECT_EQ(rank_decision(s, kRankCutoff).rank, 2);
}

TEST(NullSpace, WideAndTallMatrices) {
  Matrix A(1, 3);
  A << 1, 1, 0;
  NullSpace ns = null_space(A);
  ASSERT_EQ(ns.basis.cols(), 2);
  EXPECT_LT((A * ns.basis).norm(), 1e-14);
  EXPECT_LT((ns.basis.transpose() * ns.basis - Matrix::Identity(2, 2)).norm(), 1e-14);

  Matrix B = Matrix::Identity(4, 3);
  EXPECT_EQ(null_space(B).basis.cols(), 0);
}

TEST(Cholesky, ProducesMetricOrthonormalColumns) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix G = gen::spd(rng, 4);
    Matrix C = gen::near_identity(rng, 4, 0.5);
    Matrix F = cholesky_orthonormalize(C, G);
    EXPECT_LT((F.transpose() * G * F - Matrix::Identity(4, 4)).norm(), 1e-10);
    // Same flag as C: F = C * upper triangular.
    Matrix U = C.inverse() * F;
    EXPECT_LT(U.triangularView<Eigen::StrictlyLower>().toDenseMatrix().norm(), 1e-10);
  }
}

TEST(Cholesky, RejectsIndefiniteMetric) {
  Matrix G = Matrix::Identity(2, 2);
  G(1, 1) = -1.0;
  EXPECT_THROW(cholesky_orthonormalize(Matrix::Identity(2, 2), G), InvariantError);
}

TEST(StructureTensor, PiIsDerivativeOfAction) {
  std::mt19937 rng(3);
  StructureTensor mu = to_algebra(corpus::heisenberg(5)).tensor();
  Matrix E = gen::gaussian(rng, 5, 5);
  const double h = 1e-6;
  StructureTensor plus = mu.act(Matrix::Identity(5, 5) + h * E);
  StructureTensor minus = mu.act(Matrix::Identity(5, 5) - h * E);
  StructureTensor fd = (0.5 / h) * (plus - minus);
  EXPECT_LT((fd - mu.pi(E)).norm(), 1e-8);
}

TEST(StructureTensor, MomentTraceIdentityOnRandomTensors) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    StructureTensor mu(4);
    Matrix c = gen::gaussian(rng, 16, 1);
    int t = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int k = 0; k < 4; ++k) mu.set(i, j, k, c(t++ % 16));
    Matrix M = mu.moment();
    EXPECT_LT(mu.moment_identity_residual(M), 1e-12 * std::max(1.0, mu.norm2()));
    EXPECT_NEAR(M.trace(), -0.25 * mu.norm2(), 1e-12 * mu.norm2());
  }
}

TEST(StructureTensor, NormUsesOrderedPairs) {
  StructureTensor mu = to_algebra(corpus::heisenberg(3)).tensor();
  EXPECT_DOUBLE_EQ(mu.norm2(), 2.0);
}

TEST(StructureTensor, DerivationConstraintsMatchPi) {
  std::mt19937 rng(5);
  StructureTensor mu = to_algebra(corpus::hyperbolic(3)).tensor();
  Matrix A = derivation_constraints(mu);
  Matrix D = gen::gaussian(rng, 3, 3);
  Vector v = Eigen::Map<Vector>(D.data(), 9);
  EXPECT_LT((A * v - mu.pi(D).flatten()).norm(), 1e-12);
  EXPECT_EQ(unvec(v, 3), D);
}
