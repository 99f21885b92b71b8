#ifndef HOMSPACE_EXTENSION_HPP
#define HOMSPACE_EXTENSION_HPP

#include "homspace/check.hpp"
#include "homspace/geometry.hpp"
#include "homspace/soliton.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace homspace {

/// Raised by theorem_audit when the input does not satisfy the (lambda, n+m)
/// Einstein conditions, so the structure conclusions have nothing to say.
class AuditRefused : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

inline constexpr double kDerivationTolerance = 1e-9;

/// Throws unless D is a derivation of g mapping k into k.
inline void require_derivation_preserving(const HomogeneousSpace& hs, const Matrix& D) {
  const LieAlgebra& g = hs.algebra();
  if (D.rows() != g.dim() || D.cols() != g.dim())
    throw InvariantError("derivation must be a dim(g) x dim(g) matrix");
  double res = derivation_residual(g, D);
  if (res > kDerivationTolerance * std::max(1.0, D.norm()))
    throw InvariantError("D is not a derivation (residual " + std::to_string(res) + ")");
  const Subspace& k = hs.isotropy();
  for (int c = 0; c < k.dim(); ++c)
    if (!k.contains(D * k.basis().col(c)))
      throw InvariantError("D does not preserve the isotropy subalgebra");
}

/// R xi (+) g with [xi, X] = alpha D X, xi a unit vector orthogonal to p.
/// xi is basis vector 0 of the result; base vector i becomes i + 1.
inline HomogeneousSpace extend(const HomogeneousSpace& base, const Matrix& D, double alpha) {
  require_derivation_preserving(base, D);
  const LieAlgebra& g = base.algebra();
  const int n = g.dim();
  std::vector<StructureConstant> entries;
  for (const auto& e : g.entries()) entries.push_back({e.i + 1, e.j + 1, e.k + 1, e.c});
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (alpha * D(k, j) != 0.0) entries.push_back({0, j + 1, k + 1, alpha * D(k, j)});
  std::vector<std::string> labels;
  if (!g.labels().empty()) {
    labels.push_back("xi");
    labels.insert(labels.end(), g.labels().begin(), g.labels().end());
  }
  LieAlgebra ext(n + 1, std::move(entries), std::move(labels));

  const int dk = base.isotropy().dim();
  const int dp = base.dim();
  Matrix K = Matrix::Zero(n + 1, dk);
  K.bottomRows(n) = base.isotropy().basis();
  Matrix P = Matrix::Zero(n + 1, dp + 1);
  P(0, 0) = 1.0;
  P.bottomRightCorner(n, dp) = base.complement().basis();
  Matrix G = Matrix::Zero(dp + 1, dp + 1);
  G(0, 0) = 1.0;
  G.bottomRightCorner(dp, dp) = base.metric();
  // Jacobi in the extension is equivalent to D being a derivation, which was
  // checked with its own tolerance above.
  return HomogeneousSpace(std::move(ext), Subspace(n + 1, K), Subspace(n + 1, P), std::move(G),
                          std::nullopt, std::max(kJacobiTolerance, 1e-9 * std::abs(alpha)));
}

/// H~ = (alpha tr S(D_p)) xi + H, in the supplied coordinates of the extension.
inline Vector mean_curvature_extended(const HomogeneousSpace& base, const Matrix& D,
                                      double alpha) {
  Vector H = mean_curvature(base);
  Vector out(H.size() + 1);
  out(0) = alpha * base.induced(D).trace();
  out.tail(H.size()) = H;
  return out;
}

/// alpha = 1 / sqrt(tr S(D_p) - lambda m).
inline double hpw_alpha(const Matrix& D_p, double lambda, double m) {
  double radicand = D_p.trace() - lambda * m;
  if (!(radicand > 0.0))
    throw std::domain_error("tr S(D_p) - lambda m must be positive for a real extension");
  return 1.0 / std::sqrt(radicand);
}

inline double warping(double lambda, double alpha, double r) { return std::exp(lambda * alpha * r); }

struct LnmReport {
  double lambda = 0.0;
  int m = 0;
  double alpha = 0.0;
  double cond1_residual = 0.0;  // ||Ric - lambda I - S - alpha^2 [S, A]||
  double cond2_residual = 0.0;  // ||div S(D_p)||
  double cond3_residual = 0.0;  // |tr S^2 + lambda tr S|
  double ineqF_value = 0.0;     // tr F^2 + lambda tr F, F = S(ad_p H + D_p)
  double DH_norm = 0.0;         // ||D(H)||
  double extension_ricci_mismatch = 0.0;
  Matrix extension_ricci;       // supplied coordinates of the extension
  Matrix predicted_ricci;

  std::vector<Check> checks(double tol) const {
    std::vector<Check> out;
    out.push_back(at_most("lnm.cond1", anchors::kLnm, cond1_residual, tol));
    out.push_back(at_most("lnm.cond2", anchors::kLnm, cond2_residual, tol));
    out.push_back(at_most("lnm.cond3", anchors::kLnm, cond3_residual, tol));
    out.push_back(at_most("lnm.extension_ricci", anchors::kExtensionRicci,
                          extension_ricci_mismatch, tol));
    out.push_back(at_most("lnm.ineqF", anchors::kMeanCurvatureInequality, ineqF_value, tol));
    // Equality in the inequality happens exactly when D(H) = 0.
    bool equality = ineqF_value > -1e-8;
    bool consistent = equality ? DH_norm <= 1e-8 : DH_norm > 1e-8;
    out.push_back({"lnm.ineqF_equality_iff_DH_zero", anchors::kMeanCurvatureInequality, DH_norm,
                   1e-8, consistent});
    return out;
  }
};

inline LnmReport lnm_verify(const HomogeneousSpace& base, const Matrix& D, double lambda, int m) {
  if (!(lambda < 0.0)) throw std::invalid_argument("lambda must be negative");
  if (m < 2) throw std::invalid_argument("fiber dimension m must be an integer >= 2");
  require_derivation_preserving(base, D);

  LnmReport r;
  r.lambda = lambda;
  r.m = m;
  const int d = base.dim();
  Matrix Dp = base.induced_on(D);
  Matrix S = sym(Dp);
  Matrix A = skew(Dp);
  double trS = S.trace();
  r.alpha = hpw_alpha(Dp, lambda, m);
  double alpha2 = r.alpha * r.alpha;

  Matrix ric = ricci_on(base);
  Matrix I = Matrix::Identity(d, d);
  r.cond1_residual = (ric - lambda * I - S - alpha2 * commutator(S, A)).norm();
  r.cond2_residual = base.metric_norm(divergence_sym(base, base.from_on(S)));
  r.cond3_residual = std::abs((S * S).trace() + lambda * trS);

  Matrix adH = base.mu_p().ad(mean_curvature_on(base));
  Matrix F = sym(adH + Dp);
  r.ineqF_value = (F * F).trace() + lambda * F.trace();
  r.DH_norm = base.g_norm(D * mean_curvature_g(base));

  HomogeneousSpace ext = extend(base, D, r.alpha);
  r.extension_ricci = ricci(ext);
  Matrix Ssup = base.from_on(S);
  Matrix block = Matrix::Zero(d + 1, d + 1);
  block(0, 0) = lambda;
  block.bottomRightCorner(d, d) = -Ssup;
  r.predicted_ricci = lambda * Matrix::Identity(d + 1, d + 1) + m * lambda * alpha2 * block;
  r.extension_ricci_mismatch = ext.metric_norm(Matrix(r.extension_ricci - r.predicted_ricci));
  return r;
}

struct AuditOptions {
  double precondition_tol = 1e-9;
  double tol = 1e-8;
  FlowOptions flow;
  std::optional<Subspace> declared_nilradical;
};

struct AuditReport {
  LnmReport lnm;
  StratumLabel label;
  SolitonFit fit;            // free fit of the base
  SolitonFit fit_at_lambda;  // fit with c fixed to lambda
  std::vector<Check> checks;
  std::vector<std::string> warnings;

  bool passed() const { return all_pass(checks); }
};

/// Evaluates every structural conclusion that (lambda, n+m)-Einstein data
/// forces on the base, ending with the algebraic soliton fit.
inline AuditReport theorem_audit(const HomogeneousSpace& base_in, const Matrix& D, double lambda,
                                 int m, const AuditOptions& opts = {}) {
  AuditReport rep;
  rep.lnm = lnm_verify(base_in, D, lambda, m);
  {
    const double t = opts.precondition_tol;
    std::string failed;
    if (rep.lnm.cond1_residual > t) failed += " (1) Ricci condition";
    if (rep.lnm.cond2_residual > t) failed += " (2) divergence condition";
    if (rep.lnm.cond3_residual > t) failed += " (3) trace condition";
    if (!failed.empty())
      throw AuditRefused("audit refused: the data violates" + failed);
  }
  HomogeneousSpace hs = ensure_splitting(base_in, opts.declared_nilradical);
  rep.warnings = hs.warnings();
  const double tol = opts.tol;
  const char* S = anchors::kStructure;
  auto& out = rep.checks;

  const int dh = hs.h_dim();
  const int dn = hs.n_dim();
  const double alpha2 = rep.lnm.alpha * rep.lnm.alpha;

  StructureTensor mu_n = nil_bracket_on(hs);
  BetaEstimate est = beta_estimate(mu_n, opts.flow);
  if (!est.converged())
    throw ConsistencyError("stratum flow did not converge on the nilradical");
  rep.label = *est.label;
  out.push_back({"stratum.label_in_input_basis", anchors::kStratum,
                 est.final_gradient_norm, opts.flow.tol, rep.label.input_basis});

  Matrix E = e_beta_on(hs, rep.label);
  Matrix En = rep.label.ebeta_block();
  Vector H = mean_curvature_on(hs);
  Matrix adH = hs.mu_p().ad(H);
  Matrix Dp = hs.induced_on(D);
  Matrix F = sym(adH + Dp);
  Matrix ric = ricci_on(hs);

  out.push_back(at_most("ineqF.value", anchors::kMeanCurvatureInequality, rep.lnm.ineqF_value, tol));
  out.push_back(at_most("ineqF.D(H)=0", anchors::kMeanCurvatureInequality, rep.lnm.DH_norm, tol));

  PieDiagnostics pie = pie_check(hs, rep.label);
  out.push_back(at_least_zero("pie.value", anchors::kEbetaInequality, pie.value, tol));

  // u = k + h is a subalgebra: no n-component in [h, h]_p.
  out.push_back(at_most("structure.i.[h,h]_p_in_h", S, pie.lambda1_norm, tol));
  out.push_back(at_most("structure.ii.ebeta_in_Der(n)", S, derivation_residual(mu_n, En), tol));
  double comm_h = 0.0;
  for (int i = 0; i < dh; ++i)
    comm_h = std::max(comm_h, commutator(E, hs.mu_p().ad(i)).norm());
  out.push_back(at_most("structure.ii.[E_beta,ad_h]", S, comm_h, tol));
  out.push_back(at_most("structure.ii.[E_beta,D_p]", S, commutator(E, Dp).norm(), tol));
  out.push_back(at_most("structure.iii.S(D_p+ad_pH)=-lambda*E_beta", S,
                        (F + lambda * E).norm(), tol));
  Matrix N = adH + Dp;
  out.push_back(at_most("structure.iv.ad_pH+D_p_normal", S, commutator(N, N.transpose()).norm(), tol));

  double adYt = 0.0;
  Matrix comm_sum = Matrix::Zero(dn, dn);
  for (int i = 0; i < dh; ++i) {
    Matrix B = hs.mu_p().ad(i).bottomRightCorner(dn, dn);
    adYt = std::max(adYt, derivation_residual(mu_n, B.transpose()));
    comm_sum += commutator(B, B.transpose());
  }
  Matrix Dn = Dp.bottomRightCorner(dn, dn);
  comm_sum += alpha2 * commutator(Dn, Dn.transpose());
  out.push_back(at_most("transpose.(ad_Y|n)^t_in_Der(n)", S, adYt, tol));
  out.push_back(at_most("transpose.D_n^t_in_Der(n)", S, derivation_residual(mu_n, Dn.transpose()), tol));
  out.push_back(at_most("transpose.commutator_sum_zero", S, comm_sum.norm(), tol));
  Matrix Mn = mu_n.moment();
  out.push_back(at_most("transpose.M_n=lambda*I+F|n", S,
                        (Mn - lambda * Matrix::Identity(dn, dn) - F.bottomRightCorner(dn, dn)).norm(),
                        tol));

  out.push_back(at_most("meancurvature.S(adH|h)=0", S, sym(adH.topLeftCorner(dh, dh)).norm(), tol));
  out.push_back(at_most("closing.(ad_pH)^t_in_Der(mu_p)", S,
                        derivation_residual(hs.mu_p(), adH.transpose()), tol));
  out.push_back(at_most("closing.(ad_pH)^t_H=0", S, (adH.transpose() * H).norm(), tol));
  out.push_back(at_most("closing.[D_p,ad_pH]=0", S, commutator(Dp, adH).norm(), tol));
  out.push_back(at_most("closing.ad_pH_normal", S, commutator(adH, adH.transpose()).norm(), tol));
  out.push_back(at_most("closing.D_p_normal", S, commutator(Dp, Dp.transpose()).norm(), tol));

  rep.fit = soliton_fit(hs);
  rep.fit_at_lambda = soliton_fit(hs, lambda);
  out.push_back(at_most("soliton.residual", anchors::kSoliton, rep.fit.residual, tol));
  if (rep.fit.c_unique)
    out.push_back(at_most("soliton.c=lambda", anchors::kSoliton, std::abs(rep.fit.c - lambda), tol));
  else
    out.push_back(at_most("soliton.c=lambda", anchors::kSoliton, rep.fit_at_lambda.residual, tol));
  return rep;
}

}  // namespace homspace

#endif  // HOMSPACE_EXTENSION_HPP
