#include "support.hpp"

#include <gtest/gtest.h>

using namespace homspace;

namespace {

LieAlgebra h3() { return to_algebra(corpus::heisenberg(3)); }

Vector e(int n, int i) { return Vector::Unit(n, i); }

// [a, x] = x
LieAlgebra ax_plus_b() { return LieAlgebra(2, {{0, 1, 1, 1.0}}); }

}  // namespace

TEST(Bracket, ReadsStoredConstant) {
  EXPECT_EQ(h3().bracket(e(3, 0), e(3, 1)), e(3, 2));
  EXPECT_EQ(h3().bracket(e(3, 1), e(3, 0)), -e(3, 2));
}

TEST(Bracket, AntisymmetricAndBilinear) {
  std::mt19937 rng(1);
  LieAlgebra L = to_algebra(corpus::solvable_lambda1());
  for (int t = 0; t < 10; ++t) {
    Vector x = gen::gaussian(rng, 4, 1);
    Vector y = gen::gaussian(rng, 4, 1);
    EXPECT_LT(L.bracket(x, x).norm(), 1e-14);
    EXPECT_LT((L.bracket(x, y) + L.bracket(y, x)).norm(), 1e-13);
    EXPECT_LT((L.bracket(2.0 * x + y, y) - 2.0 * L.bracket(x, y)).norm(), 1e-13);
  }
  EXPECT_EQ(bracket_eval(h3(), e(3, 0) + e(3, 1), e(3, 1)), e(3, 2));
}

TEST(Bracket, DimensionMismatchThrows) {
  EXPECT_THROW(h3().bracket(e(2, 0), e(3, 0)), std::invalid_argument);
}

TEST(LieAlgebraConstruction, RejectsMalformedEntries) {
  EXPECT_THROW(LieAlgebra(3, {{1, 0, 2, 1.0}}), InvariantError);
  EXPECT_THROW(LieAlgebra(3, {{0, 1, 3, 1.0}}), InvariantError);
  EXPECT_THROW(LieAlgebra(3, {{0, 1, 2, 1.0}, {0, 1, 2, 2.0}}), InvariantError);
}

TEST(Jacobi, ZeroOnAbelianAndHeisenberg) {
  EXPECT_EQ(jacobi_defect(to_algebra(corpus::abelian(3))), 0.0);
  EXPECT_EQ(jacobi_defect(h3()), 0.0);
}

TEST(Jacobi, SpuriousEntryGivesPositiveDefect) {
  // [e2, e3] = 0.1 e2 on top of h3: J(e1, e2, e3) = 0.1 [e2, e1] = -0.1 e3.
  LieAlgebra L(3, {{0, 1, 2, 1.0}, {1, 2, 1, 0.1}});
  EXPECT_NEAR(jacobi_defect(L), 0.1, 1e-15);
  EXPECT_THROW(require_jacobi(L), InvariantError);
}

TEST(Jacobi, EntryInsideCentralizerKeepsJacobi) {
  // [e1, e3] = 0.1 e2 on top of h3 is still a Lie algebra.
  LieAlgebra L(3, {{0, 1, 2, 1.0}, {0, 2, 1, 0.1}});
  EXPECT_LT(jacobi_defect(L), 1e-15);
}

TEST(KillingForm, Examples) {
  EXPECT_EQ(killing_form(to_algebra(corpus::abelian(4))), Matrix::Zero(4, 4));
  EXPECT_EQ(killing_form(h3()), Matrix::Zero(3, 3));
  Matrix B = killing_form(ax_plus_b());
  EXPECT_DOUBLE_EQ(B(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(B(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(B(1, 1), 0.0);
}

TEST(KillingForm, NegativeDefiniteOnSo3) {
  Vector ev = sorted_eigenvalues(killing_form(to_algebra(corpus::so3())));
  EXPECT_NEAR(ev(2), -2.0, 1e-14);
  EXPECT_NEAR(ev(0), -2.0, 1e-14);
}

TEST(Derivations, Abelian) {
  DerivationBasis d = derivation_algebra(to_algebra(corpus::abelian(3)));
  EXPECT_EQ(d.size(), 9);
}

TEST(Derivations, HeisenbergHasSixAndContainsGrading) {
  LieAlgebra L = h3();
  DerivationBasis d = derivation_algebra(L);
  EXPECT_EQ(d.size(), 6);
  // brute force: null space of the 9 x 9 system D[ei,ej] = [Dei,ej] + [ei,Dej]
  Matrix A(27, 9);
  for (int c = 0; c < 9; ++c) {
    Matrix E = Matrix::Zero(3, 3);
    E(c % 3, c / 3) = 1.0;
    Vector col(27);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Vector r = E * L.bracket(e(3, i), e(3, j)) - L.bracket(E * e(3, i), e(3, j)) -
                   L.bracket(e(3, i), E * e(3, j));
        col.segment(3 * (3 * i + j), 3) = r;
      }
    A.col(c) = col;
  }
  Eigen::FullPivLU<Matrix> lu(A);
  EXPECT_EQ(9 - lu.rank(), 6);

  Matrix D = Eigen::Vector3d(1, 1, 2).asDiagonal();
  EXPECT_LT(derivation_residual(L, D), 1e-15);
  Matrix span(9, d.size());
  for (int i = 0; i < d.size(); ++i) span.col(i) = Eigen::Map<const Vector>(d.basis[i].data(), 9);
  Vector v = Eigen::Map<const Vector>(D.data(), 9);
  EXPECT_LT((span * (span.transpose() * v) - v).norm(), 1e-12);
}

TEST(Derivations, PreservingSubalgebra) {
  LieAlgebra ab2 = to_algebra(corpus::abelian(2));
  EXPECT_EQ(derivations_preserving(ab2, Subspace::from_indices(2, {0})).size(), 3);
  EXPECT_EQ(derivations_preserving(h3(), Subspace::zero(3)).size(), 6);
  EXPECT_EQ(derivations_preserving(h3(), Subspace::zero(3)).size(), derivation_algebra(h3()).size());
}

TEST(Derivations, PreservingRejectsNonSubalgebra) {
  EXPECT_THROW(derivations_preserving(h3(), Subspace::from_indices(3, {0, 1})), InvariantError);
}

TEST(Derivations, RankReportHasGap) {
  DerivationBasis d = derivation_algebra(h3());
  EXPECT_GT(d.rank.gap, 1e6);
}

TEST(LowerCentralSeries, Examples) {
  auto ab = lower_central_series(to_algebra(corpus::abelian(3)));
  ASSERT_EQ(ab.size(), 2u);
  EXPECT_EQ(ab[1].dim(), 0);

  auto h = lower_central_series(h3());
  ASSERT_EQ(h.size(), 3u);
  EXPECT_EQ(h[1].dim(), 1);
  EXPECT_TRUE(h[1].contains(e(3, 2)));
  EXPECT_EQ(h[2].dim(), 0);

  auto s = lower_central_series(ax_plus_b());
  EXPECT_EQ(s.back().dim(), 1);
  EXPECT_TRUE(s.back().contains(e(2, 1)));
  EXPECT_FALSE(is_nilpotent(ax_plus_b()));
}

TEST(Nilradical, NilpotentAlgebrasAreTheirOwn) {
  EXPECT_EQ(nilradical(to_algebra(corpus::abelian(4))).n.dim(), 4);
  EXPECT_EQ(nilradical(h3()).n.dim(), 3);
  EXPECT_EQ(nilradical(to_algebra(corpus::heisenberg(7))).n.dim(), 7);
}

TEST(Nilradical, HyperbolicWithWitness) {
  Nilradical nil = nilradical(to_algebra(corpus::hyperbolic(3)));
  EXPECT_EQ(nil.n.dim(), 2);
  EXPECT_TRUE(nil.n.contains(e(3, 1)));
  EXPECT_TRUE(nil.n.contains(e(3, 2)));
  ASSERT_EQ(nil.certificate.witness_radii.size(), 1u);
  EXPECT_NEAR(nil.certificate.witness_radii[0], 1.0, 1e-12);
  EXPECT_TRUE(nil.certificate.maximality_witnessed);
  EXPECT_TRUE(nil.certificate.automatic);
}

TEST(Nilradical, SolvableExamples) {
  EXPECT_EQ(nilradical(to_algebra(corpus::sol())).n.dim(), 2);
  EXPECT_EQ(nilradical(to_algebra(corpus::solvable_lambda1())).n.dim(), 2);
  Nilradical ext = nilradical(to_algebra(corpus::extension_h3()));
  EXPECT_EQ(ext.n.dim(), 3);
  EXPECT_FALSE(ext.n.contains(e(4, 0)));
}

TEST(Nilradical, DeclaredMustBeNilpotentIdeal) {
  LieAlgebra hyp = to_algebra(corpus::hyperbolic(3));
  EXPECT_THROW(nilradical(hyp, Subspace::from_indices(3, {0, 1})), InvariantError);
  EXPECT_THROW(nilradical(hyp, Subspace::full(3)), InvariantError);
  EXPECT_EQ(nilradical(hyp, Subspace::from_indices(3, {1, 2})).n.dim(), 2);
}

TEST(Nilradical, DeclaredTooSmallWarnsOnly) {
  // span(e2) is a nilpotent ideal but not maximal; e3 in the complement is ad-nilpotent.
  LieAlgebra ab = to_algebra(corpus::abelian(3));
  Nilradical nil = nilradical(ab, Subspace::from_indices(3, {1}));
  EXPECT_FALSE(nil.certificate.maximality_witnessed);
  EXPECT_FALSE(nil.certificate.warnings.empty());
}

TEST(Nilradical, AutomaticOnNonSolvableWarns) {
  Nilradical nil = nilradical(to_algebra(corpus::so3()));
  EXPECT_EQ(nil.n.dim(), 0);
  EXPECT_FALSE(nil.certificate.warnings.empty());
}

TEST(ChangeBasis, PreservesBracketRelations) {
  std::mt19937 rng(9);
  LieAlgebra L = to_algebra(corpus::extension_h3());
  Matrix C = gen::near_identity(rng, 4, 0.4);
  LieAlgebra M = L.change_basis(C);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      Vector lhs = C * M.bracket(e(4, a), e(4, b));
      Vector rhs = L.bracket(C.col(a), C.col(b));
      EXPECT_LT((lhs - rhs).norm(), 1e-12);
    }
}

TEST(Subspace, RejectsRankDeficientBasis) {
  Matrix B(3, 2);
  B << 1, 2, 0, 0, 0, 0;
  EXPECT_THROW(Subspace(3, B), InvariantError);
}
