#ifndef HOMSPACE_SOLITON_HPP
#define HOMSPACE_SOLITON_HPP

#include "homspace/check.hpp"
#include "homspace/geometry.hpp"

#include <deque>
#include <optional>
#include <random>
#include <vector>

namespace homspace {

// ---------------------------------------------------------------------------
// Algebraic soliton fit
// ---------------------------------------------------------------------------

struct SolitonFit {
  double c = 0.0;
  Matrix D;    // derivation of g (g coordinates), preserves k
  Matrix D_p;  // induced endomorphism of p, supplied coordinates
  double residual = 0.0;             // ||Ric - cI - D_p||, metric Frobenius
  double optimality_residual = 0.0;  // |<R, I>|, |<R, D_p^(r)>| worst case
  bool c_unique = true;              // I is not in the span of the D_p^(r)
  bool c_fixed = false;
  int derivation_count = 0;
  double normality_residual = 0.0;               // ||[D_p, D_p^t]||
  double symmetric_refinement_residual = 0.0;    // ||Ric - cI - S(D_p)||
};

/// Least-squares fit of Ric = cI + D_p with D ranging over the derivations of
/// g preserving k. With `fixed_c`, only D is fitted.
inline SolitonFit soliton_fit(const HomogeneousSpace& hs, std::optional<double> fixed_c = {}) {
  const int d = hs.dim();
  DerivationBasis ders = derivations_preserving(hs.algebra(), hs.isotropy());
  const int r = ders.size();
  Matrix ric = ricci_on(hs);
  Matrix I = Matrix::Identity(d, d);
  auto vec = [d](const Matrix& m) { return Vector(Eigen::Map<const Vector>(m.data(), d * d)); };

  const int offset = fixed_c ? 0 : 1;
  Matrix A(d * d, offset + r);
  if (!fixed_c) A.col(0) = vec(I);
  std::vector<Matrix> parts;
  for (int i = 0; i < r; ++i) {
    parts.push_back(hs.induced_on(ders.basis[i]));
    A.col(offset + i) = vec(parts.back());
  }
  Vector b = vec(ric);
  if (fixed_c) b -= *fixed_c * vec(I);

  SolitonFit fit;
  fit.derivation_count = r;
  fit.c_fixed = fixed_c.has_value();
  Vector x = Vector::Zero(A.cols());
  if (A.cols() > 0) {
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(A);
    cod.setThreshold(kRankCutoff);
    x = cod.solve(b);
  }
  fit.c = fixed_c ? *fixed_c : x(0);
  fit.D = Matrix::Zero(hs.algebra().dim(), hs.algebra().dim());
  Matrix Dp_on = Matrix::Zero(d, d);
  for (int i = 0; i < r; ++i) {
    fit.D += x(offset + i) * ders.basis[i];
    Dp_on += x(offset + i) * parts[i];
  }
  fit.D_p = hs.from_on(Dp_on);
  Matrix R = ric - fit.c * I - Dp_on;
  fit.residual = R.norm();
  for (Eigen::Index c = 0; c < A.cols(); ++c)
    fit.optimality_residual = std::max(fit.optimality_residual, std::abs(A.col(c).dot(vec(R))));

  if (r > 0) {
    Matrix Dmat(d * d, r);
    for (int i = 0; i < r; ++i) Dmat.col(i) = vec(parts[i]);
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(Dmat);
    cod.setThreshold(kRankCutoff);
    Vector y = cod.solve(vec(I));
    fit.c_unique = (Dmat * y - vec(I)).norm() > 1e-8 * std::sqrt(double(d));
  }
  fit.normality_residual = commutator(Dp_on, Dp_on.transpose()).norm();
  fit.symmetric_refinement_residual = (ric - fit.c * I - sym(Dp_on)).norm();
  return fit;
}

// ---------------------------------------------------------------------------
// Stratum label and the moment-map gradient flow
// ---------------------------------------------------------------------------

/// Symmetric beta with tr beta = -1, or the abelian sentinel beta = infinity.
struct StratumLabel {
  bool abelian = false;
  Matrix beta;              // in the basis of `bracket`
  Vector spectrum;          // ascending eigenvalues of beta
  StructureTensor bracket;  // unit-norm bracket beta was read from
  bool input_basis = false; // bracket is the input rescaled, so beta is in the input basis
  int flow_iterations = 0;
  double final_gradient_norm = 0.0;

  static StratumLabel infinity(int dim) {
    StratumLabel l;
    l.abelian = true;
    l.bracket = StructureTensor(dim);
    l.input_basis = true;
    return l;
  }

  /// A user-supplied beta, rescaled to trace -1 (requires tr beta < 0).
  static StratumLabel from_beta(const Matrix& beta, const StructureTensor& bracket) {
    double t = beta.trace();
    if (!(t < 0.0)) throw InvariantError("stratum label needs negative trace");
    StratumLabel l;
    l.beta = sym(beta) / (-t);
    l.spectrum = sorted_eigenvalues(l.beta);
    double n = bracket.norm();
    l.bracket = n > 0.0 ? (1.0 / n) * bracket : bracket;
    l.input_basis = true;
    return l;
  }

  int dim() const { return bracket.dim(); }

  /// beta/|beta|^2 + I, or I for the sentinel.
  Matrix ebeta_block() const {
    const int d = dim();
    if (abelian) return Matrix::Identity(d, d);
    return beta / beta.squaredNorm() + Matrix::Identity(d, d);
  }
};

struct FlowOptions {
  double step = 0.01;
  int max_iter = 200000;
  double tol = 1e-8;
  bool record_history = false;
};

struct BetaEstimate {
  std::optional<StratumLabel> label;  // empty when the flow did not converge
  int iterations = 0;
  int accepted_steps = 0;
  double final_gradient_norm = 0.0;
  std::vector<double> objective_tail;  // last objective values
  std::vector<double> history;         // full objective history if requested

  bool converged() const { return label.has_value(); }
};

/// F(mu) = ||m(mu)||^2.
inline double moment_objective(const StructureTensor& mu) {
  return normalized_moment(mu).squaredNorm();
}

/// Euclidean gradient of F(mu) = 16 tr(M^2) / |mu|^4:
/// 16 (pi(M) mu / |mu|^4 - 4 tr(M^2) mu / |mu|^6).
inline StructureTensor moment_objective_gradient(const StructureTensor& mu) {
  double n2 = mu.norm2();
  Matrix M = mu.moment();
  StructureTensor g = mu.pi(M);
  g *= 16.0 / (n2 * n2);
  g += (-64.0 * (M * M).trace() / (n2 * n2 * n2)) * mu;
  return g;
}

/// M minus its Frobenius projection onto span(I, symmetric derivations of mu).
/// Those directions fix mu up to scale, so dropping them leaves the
/// projective motion unchanged.
inline Matrix strip_stabilizer(const StructureTensor& mu, const Matrix& M) {
  const int d = mu.dim();
  Matrix skew_rows = Matrix::Zero(d * (d - 1) / 2, d * d);
  int row = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j, ++row) {
      skew_rows(row, i + j * d) = 1.0;
      skew_rows(row, j + i * d) = -1.0;
    }
  DerivationBasis ders = derivations_of(mu, skew_rows);
  Matrix cols(d * d, ders.size() + 1);
  cols.col(0) = Eigen::Map<const Vector>(Matrix(Matrix::Identity(d, d)).data(), d * d);
  for (int i = 0; i < ders.size(); ++i) cols.col(i + 1) = Eigen::Map<const Vector>(ders.basis[i].data(), d * d);
  Matrix Q = column_span(cols);
  Vector v = Eigen::Map<const Vector>(M.data(), d * d);
  return sym(unvec(v - Q * (Q.transpose() * v), d));
}

inline Matrix symmetric_exp(const Matrix& S) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(S));
  return es.eigenvectors() * es.eigenvalues().array().exp().matrix().asDiagonal() *
         es.eigenvectors().transpose();
}

/// Projected gradient descent of ||m(mu)||^2 over unit-norm brackets.
///
/// Each step moves along the group orbit, g <- exp(-s 16 M') g with M' the
/// moment minus its part along I and the symmetric derivations, and sets
/// mu = g . input, renormalized; to first order this is the Euler step
/// against the spherical gradient. Acting on the input rather than on the
/// previous iterate keeps roundoff from compounding off the Jacobi variety,
/// where critical points of nilpotent brackets are unstable. A step that increases
/// the objective by more than 1e-12 is rejected and halved; after an
/// accepted step the step size grows back by a factor 2 up to `step`.
inline BetaEstimate beta_estimate(const StructureTensor& input, const FlowOptions& opts = {}) {
  BetaEstimate out;
  const double n0 = input.norm();
  if (n0 == 0.0) {
    out.label = StratumLabel::infinity(input.dim());
    return out;
  }
  const StructureTensor start = (1.0 / n0) * input;
  StructureTensor mu = start;
  Matrix g = Matrix::Identity(input.dim(), input.dim());
  double F = moment_objective(mu);
  double step = opts.step;
  std::deque<double> tail;
  auto record = [&](double v) {
    tail.push_back(v);
    if (tail.size() > 16) tail.pop_front();
    if (opts.record_history) out.history.push_back(v);
  };
  record(F);

  double gnorm = moment_objective_gradient(mu).norm();
  while (gnorm > opts.tol && out.iterations < opts.max_iter) {
    ++out.iterations;
    Matrix M = strip_stabilizer(mu, mu.moment());
    StructureTensor candidate;
    Matrix gc;
    double Fc = 0.0;
    bool accepted = false;
    while (step > 1e-16) {
      gc = symmetric_exp(-step * 16.0 * M) * g;
      gc *= 1.0 / gc.norm();
      candidate = start.act(gc);
      candidate *= 1.0 / candidate.norm();
      Fc = moment_objective(candidate);
      if (Fc <= F + 1e-12) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    mu = std::move(candidate);
    g = std::move(gc);
    F = Fc;
    ++out.accepted_steps;
    record(F);
    step = std::min(2.0 * step, opts.step);
    gnorm = moment_objective_gradient(mu).norm();
  }
  out.final_gradient_norm = gnorm;
  out.objective_tail.assign(tail.begin(), tail.end());
  if (gnorm > opts.tol) return out;

  StratumLabel label;
  label.beta = normalized_moment(mu);
  label.spectrum = sorted_eigenvalues(label.beta);
  label.bracket = mu;
  label.input_basis = out.accepted_steps == 0;
  label.flow_iterations = out.iterations;
  label.final_gradient_norm = gnorm;
  out.label = std::move(label);
  return out;
}

// ---------------------------------------------------------------------------
// E_beta and the inequality checks
// ---------------------------------------------------------------------------

/// The nilradical bracket in the orthonormal frame of n (trailing frame block).
inline StructureTensor nil_bracket_on(const HomogeneousSpace& hs) {
  if (!hs.splitting()) throw InvariantError("a splitting p = h + n is required");
  const int dh = hs.h_dim();
  const int dn = hs.n_dim();
  StructureTensor mu(dn);
  for (int a = 0; a < dn; ++a)
    mu.ad(a) = hs.mu_p().ad(dh + a).bottomRightCorner(dn, dn);
  return mu;
}

/// blockdiag(0_h, beta/|beta|^2 + I) in the orthonormal frame.
inline Matrix e_beta_on(const HomogeneousSpace& hs, const StratumLabel& label) {
  if (!hs.splitting()) throw InvariantError("E_beta needs a splitting p = h + n");
  if (label.dim() != hs.n_dim()) throw InvariantError("stratum label has the wrong dimension");
  Matrix E = Matrix::Zero(hs.dim(), hs.dim());
  E.bottomRightCorner(hs.n_dim(), hs.n_dim()) = label.ebeta_block();
  return E;
}

inline Matrix e_beta(const HomogeneousSpace& hs, const StratumLabel& label) {
  return hs.from_on(e_beta_on(hs, label));
}

struct PieDiagnostics {
  double value = 0.0;         // tr (Ric + S(ad_p H)) E_beta
  double moment_value = 0.0;  // tr M_p E_beta
  double lambda1_norm = 0.0;
  double ebeta_derivation_residual = 0.0;  // ||pi(blockdiag(0, E_beta)) mu_g||
  bool ebeta_is_derivation = false;
  bool label_in_input_basis = true;
};

inline PieDiagnostics pie_check(const HomogeneousSpace& hs, const StratumLabel& label) {
  PieDiagnostics d;
  Matrix E = e_beta_on(hs, label);
  Matrix adH = hs.mu_p().ad(mean_curvature_on(hs));
  d.value = ((ricci_on(hs) + sym(adH)) * E).trace();
  d.moment_value = (moment_term_on(hs) * E).trace();
  d.lambda1_norm = projected_bracket(hs).lambda1_norm;
  d.ebeta_derivation_residual = derivation_residual(hs.algebra(), hs.pad_on(E));
  d.ebeta_is_derivation = d.ebeta_derivation_residual <= 1e-6;
  d.label_in_input_basis = label.input_basis;
  return d;
}

struct GitOptions {
  double tol = 1e-8;
  unsigned seed = 1;
  int random_combinations = 8;
};

/// Properties (i)-(v) of beta/|beta|^2 + I against the bracket `mu` (given in
/// an orthonormal basis) and a derivation basis of mu.
inline std::vector<Check> git_check(const StructureTensor& mu, const StratumLabel& label,
                                    const std::vector<Matrix>& ders, const GitOptions& opts = {}) {
  const char* A = anchors::kStratum;
  std::vector<Check> out;
  if (label.abelian || mu.norm2() == 0.0) {
    for (const char* n : {"git.i", "git.ii", "git.iii", "git.iv", "git.v"})
      out.push_back({n, A, 0.0, opts.tol, true});
    return out;
  }
  if (label.dim() != mu.dim()) throw InvariantError("stratum label has the wrong dimension");
  const int d = mu.dim();
  Matrix E = label.ebeta_block();

  std::vector<Matrix> probes = ders;
  std::mt19937 rng(opts.seed);
  std::normal_distribution<double> normal;
  for (int r = 0; r < opts.random_combinations && !ders.empty(); ++r) {
    Matrix D = Matrix::Zero(d, d);
    for (const auto& b : ders) D += normal(rng) * b;
    probes.push_back(D);
  }
  double worst_i = 0.0;
  double worst_iv = 0.0;
  for (const auto& D : probes) {
    worst_i = std::min(worst_i, (E * commutator(D, D.transpose())).trace());
    worst_iv = std::max(worst_iv, std::abs((E * D).trace() - D.trace()));
  }
  out.push_back(at_least_zero("git.i", A, worst_i, opts.tol));
  double min_eig = sorted_eigenvalues(E)(0);
  out.push_back({"git.ii", A, min_eig, 0.0, min_eig > 0.0});
  double excess = label.beta.norm() - normalized_moment(mu).norm();
  out.push_back(at_most("git.iii", A, excess, opts.tol));
  out.push_back(at_most("git.iv", A, worst_iv, opts.tol));
  out.push_back(at_least_zero("git.v", A, mu.pi(E).dot(mu), opts.tol));
  return out;
}

/// tr(blockdiag(ad Y|_h, 0) Ric) for Y in h, after verifying that
/// u = k + h is a subalgebra and h is orthogonal to the nilradical n.
inline double jablonski_check(const HomogeneousSpace& hs, const Vector& Y) {
  if (!hs.splitting()) throw InvariantError("hypothesis failed: no splitting p = h + n");
  const Splitting& s = *hs.splitting();
  const LieAlgebra& g = hs.algebra();
  if (s.h.dim() > 0 && !s.h.contains(Y)) throw InvariantError("hypothesis failed: Y is not in h");
  if (s.h.dim() == 0) return 0.0;
  Matrix ubasis(g.dim(), hs.isotropy().dim() + s.h.dim());
  ubasis << hs.isotropy().basis(), s.h.basis();
  Subspace u(g.dim(), ubasis);
  if (bracket_escape(g, u, u, u) > 1e-9)
    throw InvariantError("hypothesis failed: u = k + h is not a subalgebra");
  const int dh = hs.h_dim();
  Matrix A = hs.ad_p_on(Y);
  Matrix P = Matrix::Zero(hs.dim(), hs.dim());
  P.topLeftCorner(dh, dh) = A.topLeftCorner(dh, dh);
  return (P * ricci_on(hs)).trace();
}

}  // namespace homspace

#endif  // HOMSPACE_SOLITON_HPP
