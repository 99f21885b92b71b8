#include "support.hpp"

#include <gtest/gtest.h>

using namespace homspace;

namespace {

HomogeneousSpace space(const AlgebraDocument& d) { return to_space(d); }

Matrix diag(std::initializer_list<double> v) {
  Vector d(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

StructureTensor h3_bracket() { return to_algebra(corpus::heisenberg(3)).tensor(); }

StructureTensor perturbed_h3(std::mt19937& rng) {
  return h3_bracket().act(gen::near_identity(rng, 3, 0.1));
}

}  // namespace

TEST(SolitonFit, Heisenberg) {
  SolitonFit f = soliton_fit(space(corpus::heisenberg(3)));
  EXPECT_NEAR(f.c, -1.5, 1e-12);
  EXPECT_LT((f.D_p - diag({1, 1, 2})).norm(), 1e-10);
  EXPECT_LE(f.residual, 1e-10);
  EXPECT_TRUE(f.c_unique);
  EXPECT_LT(f.normality_residual, 1e-12);
  EXPECT_LT(f.symmetric_refinement_residual, 1e-10);
}

TEST(SolitonFit, EinsteinHasZeroDerivation) {
  SolitonFit f = soliton_fit(space(corpus::hyperbolic(3)));
  EXPECT_NEAR(f.c, -2.0, 1e-12);
  EXPECT_LT(f.D.norm(), 1e-10);
  EXPECT_LE(f.residual, 1e-10);
}

TEST(SolitonFit, RescaledHeisenbergBracket) {
  for (double s : {0.95, 1.05}) {
    AlgebraDocument d = corpus::heisenberg(3);
    d.brackets[0].c = s;
    SolitonFit f = soliton_fit(space(d));
    EXPECT_LE(f.residual, 1e-10);
    EXPECT_NEAR(f.c, -1.5 * s * s, 1e-12);
    EXPECT_LT((f.D_p - s * s * diag({1, 1, 2})).norm(), 1e-10);
  }
}

TEST(SolitonFit, FirstOrderOptimality) {
  std::mt19937 rng(17);
  for (const char* name : {"so3", "sol", "solvable_lambda1", "rotational_h3", "extension_h3"}) {
    HomogeneousSpace hs = space(corpus::lookup(name));
    for (int t = 0; t < 3; ++t) {
      SolitonFit f = soliton_fit(hs.with_metric(gen::invariant_metric(rng, hs)));
      EXPECT_LT(f.optimality_residual, 1e-10) << name;
    }
  }
}

TEST(SolitonFit, NonSolitonHasResidual) {
  EXPECT_GT(soliton_fit(space(corpus::so3())).residual, 1e-3);
}

TEST(SolitonFit, FixedConstant) {
  HomogeneousSpace hs = space(corpus::heisenberg(3));
  EXPECT_LE(soliton_fit(hs, -1.5).residual, 1e-12);
  EXPECT_GT(soliton_fit(hs, -1.0).residual, 0.1);
  SolitonFit ab = soliton_fit(space(corpus::abelian(3)));
  EXPECT_FALSE(ab.c_unique);
  EXPECT_LE(soliton_fit(space(corpus::abelian(3)), -1.0).residual, 1e-12);
}

TEST(NormalizedMoment, Heisenberg) {
  StructureTensor mu = h3_bracket();
  EXPECT_LT((normalized_moment(mu) - diag({-1, -1, 1})).norm(), 1e-15);
  EXPECT_LT((normalized_moment(3.0 * mu) - normalized_moment(mu)).norm(), 1e-15);
  EXPECT_NEAR(normalized_moment(mu).trace(), -1.0, 1e-15);
}

TEST(MomentObjective, GradientMatchesFiniteDifference) {
  std::mt19937 rng(31);
  for (int t = 0; t < 5; ++t) {
    StructureTensor mu = perturbed_h3(rng);
    StructureTensor v = h3_bracket().pi(gen::gaussian(rng, 3, 3));
    const double h = 1e-6;
    double fd = (moment_objective(mu + h * v) - moment_objective(mu - h * v)) / (2 * h);
    EXPECT_NEAR(fd, moment_objective_gradient(mu).dot(v), 1e-7);
  }
}

TEST(BetaEstimate, HeisenbergIsCritical) {
  BetaEstimate est = beta_estimate(h3_bracket());
  ASSERT_TRUE(est.converged());
  EXPECT_EQ(est.accepted_steps, 0);
  EXPECT_TRUE(est.label->input_basis);
  Vector expected(3);
  expected << -1, -1, 1;
  EXPECT_LT((est.label->spectrum - expected).norm(), 1e-12);
}

TEST(BetaEstimate, EveryHeisenbergMetricIsCritical) {
  std::mt19937 rng(40);
  for (int t = 0; t < 5; ++t) {
    BetaEstimate est = beta_estimate(perturbed_h3(rng));
    ASSERT_TRUE(est.converged());
    EXPECT_EQ(est.accepted_steps, 0);
  }
}

TEST(BetaEstimate, PerturbedHeisenbergRecoversSpectrum) {
  std::mt19937 rng(41);
  StructureTensor h5 = to_algebra(corpus::heisenberg(5)).tensor();
  Vector expected(5);
  expected << -0.5, -0.5, -0.5, -0.5, 1;
  for (int t = 0; t < 3; ++t) {
    FlowOptions opts;
    opts.record_history = true;
    BetaEstimate est = beta_estimate(h5.act(gen::near_identity(rng, 5, 0.1)), opts);
    ASSERT_TRUE(est.converged());
    EXPECT_GT(est.accepted_steps, 10);
    EXPECT_LT(est.label->bracket.jacobi_defect(), 1e-12);
    EXPECT_LE(est.final_gradient_norm, 1e-8);
    EXPECT_LT((est.label->spectrum - expected).cwiseAbs().maxCoeff(), 1e-4);
    for (std::size_t i = 1; i < est.history.size(); ++i)
      EXPECT_LE(est.history[i], est.history[i - 1] + 1e-12);
  }
}

TEST(BetaEstimate, ZeroBracketIsSentinel) {
  BetaEstimate est = beta_estimate(StructureTensor(4));
  ASSERT_TRUE(est.converged());
  EXPECT_TRUE(est.label->abelian);
  EXPECT_EQ(est.label->ebeta_block(), Matrix::Identity(4, 4));
}

TEST(BetaEstimate, OrthogonalConjugationInvariance) {
  std::mt19937 rng(43);
  StructureTensor mu = to_algebra(corpus::heisenberg(5)).tensor().act(gen::near_identity(rng, 5, 0.1));
  BetaEstimate a = beta_estimate(mu);
  BetaEstimate b = beta_estimate(mu.act(gen::orthogonal(rng, 5)));
  ASSERT_TRUE(a.converged());
  ASSERT_TRUE(b.converged());
  EXPECT_LT((a.label->spectrum - b.label->spectrum).cwiseAbs().maxCoeff(), 1e-4);
}

TEST(BetaEstimate, NilsolitonMomentMatchesBeta) {
  for (const char* name : {"heisenberg(3)", "heisenberg(5)", "heisenberg(7)"}) {
    HomogeneousSpace hs = space(corpus::lookup(name));
    ASSERT_LE(soliton_fit(hs).residual, 1e-9);
    BetaEstimate est = beta_estimate(hs.mu_p());
    ASSERT_TRUE(est.converged());
    Vector m = sorted_eigenvalues(normalized_moment(hs.mu_p()));
    EXPECT_LT((m - est.label->spectrum).norm(), 1e-8) << name;
  }
}

TEST(EBeta, AbelianAndHeisenberg) {
  HomogeneousSpace ab = ensure_splitting(space(corpus::abelian(3)));
  EXPECT_EQ(e_beta(ab, StratumLabel::infinity(3)), Matrix::Identity(3, 3));

  HomogeneousSpace lam = ensure_splitting(space(corpus::solvable_lambda1()));
  Matrix E = e_beta_on(lam, StratumLabel::infinity(2));
  EXPECT_EQ(E, diag({0, 0, 1, 1}));

  HomogeneousSpace h3 = space(corpus::h3_soliton());
  StratumLabel l = StratumLabel::from_beta(diag({-1, -1, 1}), h3_bracket());
  EXPECT_LT((e_beta(h3, l) - diag({2.0 / 3, 2.0 / 3, 4.0 / 3})).norm(), 1e-15);
  Matrix D = diag({1, 1, 2});
  EXPECT_NEAR((l.ebeta_block() * D).trace(), D.trace(), 1e-14);
}

TEST(PieCheck, Examples) {
  HomogeneousSpace h3 = space(corpus::h3_soliton());
  StratumLabel l = *beta_estimate(nil_bracket_on(h3)).label;
  PieDiagnostics p = pie_check(h3, l);
  EXPECT_NEAR(p.value, 0.0, 1e-12);
  EXPECT_TRUE(p.ebeta_is_derivation);
  EXPECT_LT(p.ebeta_derivation_residual, 1e-8);

  HomogeneousSpace ab = ensure_splitting(space(corpus::abelian(3)));
  PieDiagnostics pa = pie_check(ab, StratumLabel::infinity(3));
  EXPECT_EQ(pa.value, 0.0);
  EXPECT_EQ(pa.lambda1_norm, 0.0);

  HomogeneousSpace ext = ensure_splitting(space(corpus::extension_h3()));
  StratumLabel le = *beta_estimate(nil_bracket_on(ext)).label;
  ASSERT_TRUE(le.input_basis);
  EXPECT_GE(pie_check(ext, le).value, -1e-9);
}

TEST(PieCheck, ProjectedBracketContribution) {
  HomogeneousSpace hs = ensure_splitting(space(corpus::solvable_lambda1()));
  PieDiagnostics p = pie_check(hs, StratumLabel::infinity(2));
  EXPECT_NEAR(p.lambda1_norm * p.lambda1_norm, 2.0, 1e-12);
  EXPECT_NEAR(p.moment_value, 0.25 * p.lambda1_norm * p.lambda1_norm, 1e-12);
  EXPECT_GE(p.value, -1e-12);
}

TEST(GitCheck, HeisenbergPassesWithEqualities) {
  StructureTensor mu = h3_bracket();
  StratumLabel l = StratumLabel::from_beta(diag({-1, -1, 1}), mu);
  auto checks = git_check(mu, l, derivations_of(mu).basis);
  ASSERT_EQ(checks.size(), 5u);
  for (const Check& c : checks) EXPECT_TRUE(c.pass) << c.name;
  EXPECT_NEAR(checks[2].value, 0.0, 1e-12);
  EXPECT_NEAR(checks[4].value, 0.0, 1e-12);
}

TEST(GitCheck, AbelianIsVacuous) {
  auto checks = git_check(StructureTensor(3), StratumLabel::infinity(3), {});
  for (const Check& c : checks) EXPECT_TRUE(c.pass);
}

TEST(GitCheck, WrongBetaFailsTraceProperty) {
  StructureTensor mu = h3_bracket();
  StratumLabel wrong = StratumLabel::from_beta(diag({-2, 0, 1}), mu);
  auto checks = git_check(mu, wrong, derivations_of(mu).basis);
  EXPECT_FALSE(checks[3].pass);
  EXPECT_FALSE(all_pass(checks));
}

TEST(ReductiveTrace, Examples) {
  EXPECT_EQ(jablonski_check(space(corpus::h3_soliton()), Vector::Zero(3)), 0.0);

  HomogeneousSpace ext = ensure_splitting(space(corpus::extension_h3()));
  ASSERT_EQ(ext.h_dim(), 1);
  EXPECT_NEAR(jablonski_check(ext, Vector(ext.frame().col(0))), 0.0, 1e-10);

  HomogeneousSpace hyp = ensure_splitting(space(corpus::hyperbolic(3)));
  EXPECT_NEAR(jablonski_check(hyp, Vector::Unit(3, 0)), 0.0, 1e-12);
}

TEST(ReductiveTrace, RefusesWhenHypothesesFail) {
  HomogeneousSpace hs = ensure_splitting(space(corpus::solvable_lambda1()));
  EXPECT_THROW(jablonski_check(hs, Vector(hs.frame().col(0))), InvariantError);
  EXPECT_THROW(jablonski_check(space(corpus::heisenberg(3)), Vector::Zero(3)), InvariantError);
}
