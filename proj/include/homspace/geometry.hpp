#ifndef HOMSPACE_GEOMETRY_HPP
#define HOMSPACE_GEOMETRY_HPP

#include "homspace/algebra.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace homspace {

/// p = h (+) n, metric-orthogonal, n the nilradical of g.
struct Splitting {
  Subspace h;
  Subspace n;
};

/// A reductive homogeneous space G/K at the base point: g = k (+) p with an
/// Ad(K)-invariant inner product on p.
///
/// Operators on p are exchanged in the "supplied" basis (the columns of the
/// complement subspace, in which `metric` is written). Internally everything
/// is computed in an orthonormal frame obtained by Cholesky
/// orthonormalization of that basis (adapted to h (+) n when a splitting is
/// present); `to_on` / `from_on` convert between the two.
class HomogeneousSpace {
 public:
  HomogeneousSpace(LieAlgebra g, Subspace k, Subspace p, Matrix metric,
                   std::optional<Splitting> splitting = std::nullopt,
                   double jacobi_tol = kJacobiTolerance)
      : g_(std::move(g)),
        k_(std::move(k)),
        p_(std::move(p)),
        metric_(std::move(metric)),
        splitting_(std::move(splitting)) {
    validate_and_build(jacobi_tol);
  }

  static HomogeneousSpace lie_group(LieAlgebra g, std::optional<Matrix> metric = std::nullopt,
                                    double jacobi_tol = kJacobiTolerance) {
    const int n = g.dim();
    Matrix G = metric ? *metric : Matrix(Matrix::Identity(n, n));
    return HomogeneousSpace(std::move(g), Subspace::zero(n), Subspace::full(n), std::move(G),
                            std::nullopt, jacobi_tol);
  }

  /// Same data with a splitting attached (validated).
  HomogeneousSpace with_splitting(Splitting s) const {
    return HomogeneousSpace(g_, k_, p_, metric_, std::move(s), 1.0);
  }
  HomogeneousSpace with_metric(Matrix G) const {
    return HomogeneousSpace(g_, k_, p_, std::move(G), splitting_, 1.0);
  }

  const LieAlgebra& algebra() const { return g_; }
  const Subspace& isotropy() const { return k_; }
  const Subspace& complement() const { return p_; }
  const Matrix& metric() const { return metric_; }
  const std::optional<Splitting>& splitting() const { return splitting_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  int dim() const { return p_.dim(); }
  int h_dim() const { return splitting_ ? splitting_->h.dim() : 0; }
  int n_dim() const { return splitting_ ? splitting_->n.dim() : dim(); }

  /// Orthonormal basis of p, as columns in g coordinates.
  const Matrix& frame() const { return frame_; }
  /// Supplied p-coordinates of the orthonormal frame vectors.
  const Matrix& on_to_supplied() const { return T_; }

  Matrix to_on(const Matrix& E) const { return Tinv_ * E * T_; }
  Matrix from_on(const Matrix& E) const { return T_ * E * Tinv_; }
  Vector vec_to_on(const Vector& v) const { return Tinv_ * v; }
  Vector vec_from_on(const Vector& v) const { return T_ * v; }
  double metric_norm(const Matrix& E) const { return to_on(E).norm(); }
  double metric_norm(const Vector& v) const { return vec_to_on(v).norm(); }

  /// Orthonormal-frame coordinates of the p-component of a g vector.
  Vector p_on(const Vector& v) const { return Tinv_ * (Winv_.topRows(dim()) * v); }
  /// g-coordinates of the k-component of a g vector.
  Vector k_part(const Vector& v) const {
    return k_.basis() * (Winv_.bottomRows(k_.dim()) * v);
  }
  /// Norm of a g vector: metric norm on p plus coordinate norm on k.
  double g_norm(const Vector& v) const {
    return std::sqrt(p_on(v).squaredNorm() + k_part(v).squaredNorm());
  }

  /// mu_p in the orthonormal frame.
  const StructureTensor& mu_p() const { return mu_p_; }

  /// ad_p(z) in the orthonormal frame for z in g: x -> [z, x]_p.
  Matrix ad_p_on(const Vector& z) const {
    Matrix A(dim(), dim());
    for (int c = 0; c < dim(); ++c) A.col(c) = p_on(g_.bracket(z, frame_.col(c)));
    return A;
  }

  /// The endomorphism of p induced by D (which must preserve k), in the
  /// orthonormal frame.
  Matrix induced_on(const Matrix& D) const {
    Matrix A(dim(), dim());
    for (int c = 0; c < dim(); ++c) A.col(c) = p_on(D * frame_.col(c));
    return A;
  }
  Matrix induced(const Matrix& D) const { return from_on(induced_on(D)); }

  /// g-endomorphism equal to E (orthonormal frame) on p and zero on k.
  Matrix pad_on(const Matrix& E) const {
    Matrix Pon = Tinv_ * Winv_.topRows(dim());  // g -> frame coords
    return frame_ * E * Pon;
  }

  /// ad_p([X_a, X_b]_k) in the orthonormal frame.
  const Matrix& isotropy_term_on(int a, int b) const { return iso_terms_[a * dim() + b]; }

 private:
  void validate_and_build(double jacobi_tol) {
    const int n = g_.dim();
    if (k_.ambient_dim() != n || p_.ambient_dim() != n)
      throw InvariantError("isotropy/complement live in a different space");
    if (k_.dim() + p_.dim() != n) throw InvariantError("dim k + dim p must equal dim g");
    require_jacobi(g_, jacobi_tol);

    const int dp = p_.dim();
    if (metric_.rows() != dp || metric_.cols() != dp)
      throw InvariantError("metric must be a dim(p) x dim(p) matrix");
    if ((metric_ - metric_.transpose()).norm() > 1e-12 * std::max(1.0, metric_.norm()))
      throw InvariantError("metric is not symmetric");
    if (dp > 0 && sorted_eigenvalues(metric_)(0) <= 0.0)
      throw InvariantError("metric is not positive definite");

    Matrix W(n, n);
    W << p_.basis(), k_.basis();
    Eigen::FullPivLU<Matrix> lu(W);
    if (!lu.isInvertible()) throw InvariantError("k and p do not span g");
    Winv_ = lu.inverse();

    const double tol = 1e-9;
    if (k_.dim() > 0) {
      if (bracket_escape(g_, k_, k_, k_) > tol) throw InvariantError("k is not a subalgebra");
      Matrix B = killing_form(g_);
      Matrix Bk = k_.basis().transpose() * B * k_.basis();
      if (sorted_eigenvalues(Bk).maxCoeff() >= 0.0)
        throw InvariantError("Killing form is not negative definite on k");
      Matrix Bkp = k_.basis().transpose() * B * p_.basis();
      if (Bkp.norm() > tol * std::max(1.0, B.norm()))
        throw InvariantError("p is not Killing-orthogonal to k");
    }

    // Orthonormal frame, adapted to the splitting if there is one.
    Matrix Psup = Matrix::Identity(dp, dp);
    if (splitting_) {
      const Subspace& h = splitting_->h;
      const Subspace& nn = splitting_->n;
      if (h.ambient_dim() != n || nn.ambient_dim() != n)
        throw InvariantError("splitting lives in a different space");
      if (h.dim() + nn.dim() != dp) throw InvariantError("dim h + dim n must equal dim p");
      Matrix Ch = Winv_.topRows(dp) * h.basis();
      Matrix Cn = Winv_.topRows(dp) * nn.basis();
      if ((Winv_.bottomRows(k_.dim()) * h.basis()).norm() > tol ||
          (Winv_.bottomRows(k_.dim()) * nn.basis()).norm() > tol)
        throw InvariantError("splitting subspaces must lie in p");
      if ((Ch.transpose() * metric_ * Cn).norm() > tol)
        throw InvariantError("h and n are not metric-orthogonal");
      Nilradical nil = nilradical(g_, nn);
      for (auto& w : nil.certificate.warnings) warnings_.push_back(w);
      T_.resize(dp, dp);
      T_ << cholesky_orthonormalize(Ch, metric_), cholesky_orthonormalize(Cn, metric_);
    } else {
      T_ = cholesky_orthonormalize(Psup, metric_);
    }
    Tinv_ = T_.inverse();
    frame_ = p_.basis() * T_;

    mu_p_ = StructureTensor(dp);
    for (int a = 0; a < dp; ++a) mu_p_.ad(a) = ad_p_on(frame_.col(a));

    for (int c = 0; c < k_.dim(); ++c) {
      Vector z = k_.basis().col(c);
      for (int a = 0; a < dp; ++a) {
        Vector v = g_.bracket(z, frame_.col(a));
        if (k_part(v).norm() > tol) throw InvariantError("[k, p] is not contained in p");
      }
      Matrix A = ad_p_on(z);
      if ((A + A.transpose()).norm() > tol * std::max(1.0, A.norm()))
        throw InvariantError("ad(k) does not act skew-symmetrically on p (metric not Ad(K)-invariant)");
    }

    iso_terms_.assign(static_cast<std::size_t>(dp * dp), Matrix::Zero(dp, dp));
    if (k_.dim() > 0)
      for (int a = 0; a < dp; ++a)
        for (int b = 0; b < dp; ++b) {
          Vector z = k_part(g_.bracket(frame_.col(a), frame_.col(b)));
          if (z.norm() > 0.0) iso_terms_[a * dp + b] = ad_p_on(z);
        }
  }

  LieAlgebra g_;
  Subspace k_;
  Subspace p_;
  Matrix metric_;
  std::optional<Splitting> splitting_;
  std::vector<std::string> warnings_;

  Matrix Winv_;
  Matrix T_;
  Matrix Tinv_;
  Matrix frame_;
  StructureTensor mu_p_;
  std::vector<Matrix> iso_terms_;
};

struct EndomorphismSplit {
  Matrix full;
  Matrix symmetric_part;
  Matrix skew_part;
};

/// Metric adjoint G^{-1} E^T G of an endomorphism written in the supplied basis.
inline Matrix metric_transpose(const HomogeneousSpace& hs, const Matrix& E) {
  const Matrix& G = hs.metric();
  return G.ldlt().solve(E.transpose() * G);
}

inline EndomorphismSplit metric_adjoint(const HomogeneousSpace& hs, const Matrix& E) {
  Matrix Et = metric_transpose(hs, E);
  return {E, 0.5 * (E + Et), 0.5 * (E - Et)};
}

inline Vector mean_curvature_on(const HomogeneousSpace& hs) {
  Vector H(hs.dim());
  for (int i = 0; i < hs.dim(); ++i) H(i) = hs.algebra().ad(Vector(hs.frame().col(i))).trace();
  return H;
}

/// The vector H in p with <H, X> = tr ad X, supplied coordinates.
inline Vector mean_curvature(const HomogeneousSpace& hs) {
  return hs.vec_from_on(mean_curvature_on(hs));
}

/// H as a vector of g.
inline Vector mean_curvature_g(const HomogeneousSpace& hs) {
  return hs.frame() * mean_curvature_on(hs);
}

inline Matrix killing_p_on(const HomogeneousSpace& hs) {
  return hs.frame().transpose() * killing_form(hs.algebra()) * hs.frame();
}

/// M_p in the orthonormal frame, validated against its defining trace identity.
inline Matrix moment_term_on(const HomogeneousSpace& hs) {
  const StructureTensor& mu = hs.mu_p();
  Matrix M = mu.moment();
  double residual = mu.moment_identity_residual(M);
  if (residual > 1e-9 * std::max(1.0, mu.norm2()))
    throw ConsistencyError("moment term fails its trace identity (residual " +
                           std::to_string(residual) + ")");
  return M;
}

inline Matrix moment_term(const HomogeneousSpace& hs) { return hs.from_on(moment_term_on(hs)); }

/// Ric = M_p - 1/2 B_p - S(ad_p H), orthonormal frame.
inline Matrix ricci_on(const HomogeneousSpace& hs) {
  Matrix adH = hs.mu_p().ad(mean_curvature_on(hs));
  return moment_term_on(hs) - 0.5 * killing_p_on(hs) - sym(adH);
}

inline Matrix ricci(const HomogeneousSpace& hs) { return hs.from_on(ricci_on(hs)); }

/// Nomizu operators Lambda(X_a) in the orthonormal frame:
/// Lambda(X) Y = 1/2 [X, Y]_p + U(X, Y), with U from the Koszul formula
/// 2 <U(X, Y), Z> = <[Z, X]_p, Y> + <X, [Z, Y]_p>.
inline std::vector<Matrix> nomizu_on(const HomogeneousSpace& hs) {
  const int d = hs.dim();
  const StructureTensor& mu = hs.mu_p();
  std::vector<Matrix> lambda(d, Matrix::Zero(d, d));
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c) {
        double u = 0.5 * (mu.ad(c)(b, a) + mu.ad(c)(a, b));
        lambda[a](c, b) = 0.5 * mu.ad(a)(c, b) + u;
      }
  return lambda;
}

/// Ricci from the curvature tensor
/// R(X, Y) = [Lambda(X), Lambda(Y)] - Lambda([X, Y]_p) - ad([X, Y]_k)|_p,
/// Ric(Y, Z) = tr(X -> R(X, Y) Z). Orthonormal frame.
inline Matrix ricci_via_connection_on(const HomogeneousSpace& hs) {
  const int d = hs.dim();
  const StructureTensor& mu = hs.mu_p();
  std::vector<Matrix> lambda = nomizu_on(hs);
  Matrix ric = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      Matrix R = commutator(lambda[a], lambda[b]) - hs.isotropy_term_on(a, b);
      for (int c = 0; c < d; ++c) R -= mu.ad(a)(c, b) * lambda[c];
      ric.row(b) += R.row(a);
    }
  return ric;
}

inline Matrix ricci_via_connection(const HomogeneousSpace& hs) {
  return hs.from_on(ricci_via_connection_on(hs));
}

/// div T = sum_i (nabla_{X_i} T) X_i with nabla_X T = [Lambda(X), T]; returned
/// as the metric-dual vector in supplied coordinates.
inline Vector divergence_sym(const HomogeneousSpace& hs, const Matrix& T) {
  const int d = hs.dim();
  Matrix Ton = hs.to_on(T);
  std::vector<Matrix> lambda = nomizu_on(hs);
  Vector div = Vector::Zero(d);
  for (int i = 0; i < d; ++i) div += commutator(lambda[i], Ton).col(i);
  return hs.vec_from_on(div);
}

struct ProjectedBracket {
  StructureTensor mu;         // mu_p in the orthonormal frame
  double lambda1_norm = 0.0;  // n-part of [h, h]_p, ordered-pair norm
};

inline ProjectedBracket projected_bracket(const HomogeneousSpace& hs) {
  ProjectedBracket out{hs.mu_p(), 0.0};
  const int dh = hs.h_dim();
  const int dn = hs.n_dim();
  if (hs.splitting()) {
    double s = 0.0;
    for (int i = 0; i < dh; ++i)
      for (int j = 0; j < dh; ++j) s += hs.mu_p().ad(i).col(j).tail(dn).squaredNorm();
    out.lambda1_norm = std::sqrt(s);
  }
  return out;
}

/// Attaches the nilradical splitting (h the metric-orthogonal complement of
/// n in p) when none is present.
inline HomogeneousSpace ensure_splitting(const HomogeneousSpace& hs,
                                         std::optional<Subspace> declared = std::nullopt) {
  if (hs.splitting()) return hs;
  Nilradical nil = nilradical(hs.algebra(), declared);
  const Subspace& n = nil.n;
  const int dp = hs.dim();
  // n in frame coordinates; h = frame-orthogonal complement.
  Matrix Nn(dp, n.dim());
  for (int c = 0; c < n.dim(); ++c) {
    Vector v = n.basis().col(c);
    if (hs.k_part(v).norm() > 1e-9) throw InvariantError("nilradical is not contained in p");
    Nn.col(c) = hs.p_on(v);
  }
  Matrix Hon = n.dim() == 0 ? Matrix(Matrix::Identity(dp, dp))
                            : null_space(Matrix(Nn.transpose())).basis;
  Subspace h(hs.algebra().dim(), hs.frame() * Hon);
  return hs.with_splitting({h, n});
}

}  // namespace homspace

#endif  // HOMSPACE_GEOMETRY_HPP
