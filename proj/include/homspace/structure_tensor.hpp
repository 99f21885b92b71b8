#ifndef HOMSPACE_STRUCTURE_TENSOR_HPP
#define HOMSPACE_STRUCTURE_TENSOR_HPP

#include "homspace/linalg.hpp"

#include <vector>

namespace homspace {

/// Dense bilinear antisymmetric map mu : R^d x R^d -> R^d in a fixed basis.
///
/// Stored as the d adjoint matrices, ad(e_i)(k, j) = <mu(e_i, e_j), e_k>.
/// When the basis is orthonormal for some inner product the coordinate
/// inner product below is the induced one on Lambda^2 V* (x) V, summed over
/// ordered pairs (i, j).
class StructureTensor {
 public:
  StructureTensor() = default;
  explicit StructureTensor(int dim) : dim_(dim), ad_(dim, Matrix::Zero(dim, dim)) {}

  int dim() const { return dim_; }

  /// Sets mu(e_i, e_j) = -mu(e_j, e_i) to have coefficient c on e_k.
  void set(int i, int j, int k, double c) {
    ad_[i](k, j) = c;
    ad_[j](k, i) = -c;
  }
  double get(int i, int j, int k) const { return ad_[i](k, j); }

  const Matrix& ad(int i) const { return ad_[i]; }
  Matrix& ad(int i) { return ad_[i]; }

  Matrix ad(const Vector& x) const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      if (x(i) != 0.0) out += x(i) * ad_[i];
    return out;
  }

  Vector bracket(const Vector& x, const Vector& y) const { return ad(x) * y; }

  /// pi(E) mu = E mu(.,.) - mu(E.,.) - mu(., E.), the derivative of the
  /// change-of-basis action g.mu = g mu(g^{-1}., g^{-1}.).
  StructureTensor pi(const Matrix& E) const {
    StructureTensor out(dim_);
    for (int i = 0; i < dim_; ++i)
      out.ad_[i] = E * ad_[i] - ad(Vector(E.col(i))) - ad_[i] * E;
    return out;
  }

  /// g . mu = g mu(g^{-1}., g^{-1}.)
  StructureTensor act(const Matrix& g) const {
    Matrix ginv = g.inverse();
    StructureTensor out(dim_);
    for (int i = 0; i < dim_; ++i)
      out.ad_[i] = g * ad(Vector(ginv.col(i))) * ginv;
    return out;
  }

  double dot(const StructureTensor& other) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += ad_[i].cwiseProduct(other.ad_[i]).sum();
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  StructureTensor& operator+=(const StructureTensor& o) {
    for (int i = 0; i < dim_; ++i) ad_[i] += o.ad_[i];
    return *this;
  }
  StructureTensor& operator*=(double s) {
    for (auto& a : ad_) a *= s;
    return *this;
  }
  friend StructureTensor operator*(double s, StructureTensor t) { return t *= s; }
  friend StructureTensor operator+(StructureTensor a, const StructureTensor& b) {
    return a += b;
  }
  friend StructureTensor operator-(StructureTensor a, const StructureTensor& b) {
    return a += (-1.0) * b;
  }

  /// max over basis triples of the Jacobi cyclic sum.
  double jacobi_defect() const {
    double worst = 0.0;
    for (int i = 0; i < dim_; ++i)
      for (int j = i + 1; j < dim_; ++j)
        for (int k = j + 1; k < dim_; ++k) {
          Vector ei = Vector::Unit(dim_, i), ej = Vector::Unit(dim_, j),
                 ek = Vector::Unit(dim_, k);
          Vector s = bracket(bracket(ei, ej), ek) + bracket(bracket(ej, ek), ei) +
                     bracket(bracket(ek, ei), ej);
          worst = std::max(worst, s.norm());
        }
    return worst;
  }

  /// The symmetric M with tr(M E) = 1/4 <pi(E) mu, mu> for all E, valid when
  /// the basis is orthonormal:
  ///   M_ab = -1/2 <ad_a, ad_b>_F + 1/4 sum_i (ad_i ad_i^T)_ab.
  Matrix moment() const {
    Matrix M = Matrix::Zero(dim_, dim_);
    for (int a = 0; a < dim_; ++a)
      for (int b = a; b < dim_; ++b) {
        double v = -0.5 * ad_[a].cwiseProduct(ad_[b]).sum();
        M(a, b) = M(b, a) = v;
      }
    for (int i = 0; i < dim_; ++i) M += 0.25 * ad_[i] * ad_[i].transpose();
    return M;
  }

  /// Largest |tr(M E_ab) - 1/4 <pi(E_ab) mu, mu>| over elementary E_ab.
  double moment_identity_residual(const Matrix& M) const {
    double worst = 0.0;
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b) {
        Matrix E = Matrix::Zero(dim_, dim_);
        E(a, b) = 1.0;
        double lhs = (M * E).trace();
        double rhs = 0.25 * pi(E).dot(*this);
        worst = std::max(worst, std::abs(lhs - rhs));
      }
    return worst;
  }

  Vector flatten() const {
    Vector v(dim_ * dim_ * dim_);
    for (int i = 0; i < dim_; ++i)
      v.segment(i * dim_ * dim_, dim_ * dim_) =
          Eigen::Map<const Vector>(ad_[i].data(), dim_ * dim_);
    return v;
  }

  /// Restriction of mu to the span of the orthonormal columns Q, projected
  /// orthogonally back onto that span. Exact when the span is invariant.
  StructureTensor restrict_to(const Matrix& Q) const {
    const int d = static_cast<int>(Q.cols());
    StructureTensor out(d);
    for (int a = 0; a < d; ++a) out.ad_[a] = Q.transpose() * ad(Vector(Q.col(a))) * Q;
    return out;
  }

 private:
  int dim_ = 0;
  std::vector<Matrix> ad_;
};

/// Coordinate matrix of the linear map D -> pi(D) mu on gl(d), with D
/// vectorized column-major. Its null space is Der(mu).
inline Matrix derivation_constraints(const StructureTensor& mu) {
  const int d = mu.dim();
  Matrix A(d * d * d, d * d);
  for (int b = 0; b < d; ++b)
    for (int a = 0; a < d; ++a) {
      Matrix E = Matrix::Zero(d, d);
      E(a, b) = 1.0;
      A.col(a + b * d) = mu.pi(E).flatten();
    }
  return A;
}

inline Matrix unvec(const Vector& v, int d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

/// Normalized moment map m(mu) = 4 M / |mu|^2. Zero for mu = 0.
inline Matrix normalized_moment(const StructureTensor& mu) {
  double n2 = mu.norm2();
  if (n2 == 0.0) return Matrix::Zero(mu.dim(), mu.dim());
  return 4.0 * mu.moment() / n2;
}

}  // namespace homspace

#endif  // HOMSPACE_STRUCTURE_TENSOR_HPP
