#ifndef HOMSPACE_ALGEBRA_HPP
#define HOMSPACE_ALGEBRA_HPP

#include "homspace/linalg.hpp"
#include "homspace/structure_tensor.hpp"

#include <optional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace homspace {

/// One stored structure constant: [e_i, e_j] has coefficient c on e_k.
/// Indices are zero-based and i < j; the (j, i) entry is implied.
struct StructureConstant {
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;
};

inline constexpr double kJacobiTolerance = 1e-12;

class LieAlgebra {
 public:
  LieAlgebra() = default;

  LieAlgebra(int dim, std::vector<StructureConstant> entries,
             std::vector<std::string> labels = {})
      : dim_(dim), entries_(std::move(entries)), labels_(std::move(labels)), mu_(dim) {
    if (dim <= 0) throw InvariantError("Lie algebra dimension must be positive");
    if (!labels_.empty() && static_cast<int>(labels_.size()) != dim)
      throw InvariantError("label count does not match dimension");
    std::set<std::tuple<int, int, int>> seen;
    for (const auto& e : entries_) {
      if (e.i < 0 || e.j < 0 || e.k < 0 || e.i >= dim || e.j >= dim || e.k >= dim)
        throw InvariantError("structure constant index out of range");
      if (e.i >= e.j) throw InvariantError("structure constants must satisfy i < j");
      if (!seen.insert({e.i, e.j, e.k}).second)
        throw InvariantError("duplicate structure constant");
      mu_.set(e.i, e.j, e.k, e.c);
    }
  }

  /// Builds the algebra from a dense tensor, dropping exact zeros.
  static LieAlgebra from_tensor(const StructureTensor& mu) {
    std::vector<StructureConstant> entries;
    for (int i = 0; i < mu.dim(); ++i)
      for (int j = i + 1; j < mu.dim(); ++j)
        for (int k = 0; k < mu.dim(); ++k)
          if (mu.get(i, j, k) != 0.0) entries.push_back({i, j, k, mu.get(i, j, k)});
    return LieAlgebra(mu.dim(), std::move(entries));
  }

  int dim() const { return dim_; }
  const std::vector<StructureConstant>& entries() const { return entries_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const StructureTensor& tensor() const { return mu_; }

  Vector bracket(const Vector& x, const Vector& y) const {
    if (x.size() != dim_ || y.size() != dim_)
      throw std::invalid_argument("bracket: vector dimension does not match algebra");
    return mu_.bracket(x, y);
  }

  Matrix ad(const Vector& x) const {
    if (x.size() != dim_) throw std::invalid_argument("ad: dimension mismatch");
    return mu_.ad(x);
  }
  const Matrix& ad(int i) const { return mu_.ad(i); }

  double jacobi_defect() const { return mu_.jacobi_defect(); }

  /// Same algebra written in the basis given by the columns of `change`
  /// (new e'_a = sum_b change(b, a) e_b).
  LieAlgebra change_basis(const Matrix& change) const {
    return from_tensor(mu_.act(change.inverse()));
  }

 private:
  int dim_ = 0;
  std::vector<StructureConstant> entries_;
  std::vector<std::string> labels_;
  StructureTensor mu_;
};

inline Vector bracket_eval(const LieAlgebra& L, const Vector& x, const Vector& y) {
  return L.bracket(x, y);
}

inline double jacobi_defect(const LieAlgebra& L) { return L.jacobi_defect(); }

inline void require_jacobi(const LieAlgebra& L, double tol = kJacobiTolerance) {
  double d = L.jacobi_defect();
  if (d > tol)
    throw InvariantError("Jacobi identity fails (defect " + std::to_string(d) + ")");
}

/// Linear subspace of R^n given by a full-column-rank basis matrix.
class Subspace {
 public:
  Subspace() = default;
  Subspace(int ambient_dim, Matrix basis) : ambient_(ambient_dim), basis_(std::move(basis)) {
    if (basis_.rows() != ambient_)
      throw InvariantError("subspace basis has the wrong ambient dimension");
    if (basis_.cols() > 0) {
      Eigen::JacobiSVD<Matrix> svd(basis_);
      const Vector& s = svd.singularValues();
      if (s(s.size() - 1) <= kRankCutoff * s(0))
        throw InvariantError("subspace basis columns are linearly dependent");
    }
  }

  static Subspace zero(int n) { return Subspace(n, Matrix(n, 0)); }
  static Subspace full(int n) { return Subspace(n, Matrix::Identity(n, n)); }
  static Subspace from_indices(int n, const std::vector<int>& idx) {
    Matrix B = Matrix::Zero(n, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t c = 0; c < idx.size(); ++c) {
      if (idx[c] < 0 || idx[c] >= n) throw InvariantError("subspace index out of range");
      B(idx[c], static_cast<Eigen::Index>(c)) = 1.0;
    }
    return Subspace(n, B);
  }
  /// Span of arbitrary vectors, rank decided by the global cutoff.
  static Subspace span(int n, const Matrix& vectors) {
    return Subspace(n, column_span(vectors));
  }

  int ambient_dim() const { return ambient_; }
  int dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }

  Matrix orthonormal_basis() const { return column_span(basis_); }
  Matrix projector() const {
    Matrix Q = orthonormal_basis();
    return Q * Q.transpose();
  }
  /// Euclidean orthonormal basis of the coordinate-orthogonal complement.
  Matrix complement_basis() const {
    if (dim() == 0) return Matrix::Identity(ambient_, ambient_);
    return null_space(orthonormal_basis().transpose()).basis;
  }
  double distance(const Vector& v) const { return (v - projector() * v).norm(); }
  bool contains(const Vector& v, double tol = 1e-9) const {
    return distance(v) <= tol * std::max(1.0, v.norm());
  }

 private:
  int ambient_ = 0;
  Matrix basis_;
};

inline Subspace bracket_span(const LieAlgebra& L, const Subspace& A, const Subspace& B) {
  const int n = L.dim();
  Matrix images(n, A.dim() * B.dim());
  int c = 0;
  for (int a = 0; a < A.dim(); ++a)
    for (int b = 0; b < B.dim(); ++b)
      images.col(c++) = L.bracket(A.basis().col(a), B.basis().col(b));
  return Subspace::span(n, images);
}

/// Largest component of [A, B] outside C.
inline double bracket_escape(const LieAlgebra& L, const Subspace& A, const Subspace& B,
                             const Subspace& C) {
  Matrix P = C.projector();
  double worst = 0.0;
  for (int a = 0; a < A.dim(); ++a)
    for (int b = 0; b < B.dim(); ++b) {
      Vector v = L.bracket(A.basis().col(a), B.basis().col(b));
      worst = std::max(worst, (v - P * v).norm());
    }
  return worst;
}

inline Matrix killing_form(const LieAlgebra& L) {
  const int n = L.dim();
  Matrix B(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) B(i, j) = B(j, i) = (L.ad(i) * L.ad(j)).trace();
  return B;
}

struct DerivationBasis {
  int dim = 0;                // dimension of the algebra acted on
  std::vector<Matrix> basis;  // orthonormal in the Frobenius inner product
  RankReport rank;

  int size() const { return static_cast<int>(basis.size()); }
};

inline DerivationBasis derivations_of(const StructureTensor& mu, const Matrix& extra_rows = {}) {
  const int d = mu.dim();
  Matrix A = derivation_constraints(mu);
  if (extra_rows.size() > 0) {
    Matrix stacked(A.rows() + extra_rows.rows(), A.cols());
    stacked << A, extra_rows;
    A = std::move(stacked);
  }
  NullSpace ns = null_space(A);
  DerivationBasis out;
  out.dim = d;
  out.rank = ns.rank;
  for (Eigen::Index c = 0; c < ns.basis.cols(); ++c)
    out.basis.push_back(unvec(ns.basis.col(c), d));
  return out;
}

inline DerivationBasis derivation_algebra(const LieAlgebra& L) {
  return derivations_of(L.tensor());
}

/// ||pi(D) mu||, zero exactly for derivations.
inline double derivation_residual(const StructureTensor& mu, const Matrix& D) {
  return mu.pi(D).norm();
}

inline double derivation_residual(const LieAlgebra& L, const Matrix& D) {
  return derivation_residual(L.tensor(), D);
}

inline DerivationBasis derivations_preserving(const LieAlgebra& L, const Subspace& k) {
  const int n = L.dim();
  if (k.ambient_dim() != n)
    throw std::invalid_argument("derivations_preserving: subspace lives in another space");
  if (k.dim() > 0 && bracket_escape(L, k, k, k) > 1e-9)
    throw InvariantError("derivations_preserving: k is not a subalgebra");
  if (k.dim() == 0) return derivation_algebra(L);
  Matrix Q = k.orthonormal_basis();
  Matrix outside = Matrix::Identity(n, n) - Q * Q.transpose();
  // (I - QQ^T) D q = 0  <=>  (q^T kron (I - QQ^T)) vec(D) = 0
  Matrix rows(n * Q.cols(), n * n);
  for (Eigen::Index c = 0; c < Q.cols(); ++c) {
    Matrix block(n, n * n);
    for (int b = 0; b < n; ++b) block.middleCols(b * n, n) = Q(b, c) * outside;
    rows.middleRows(c * n, n) = block;
  }
  return derivations_of(L.tensor(), rows);
}

/// g, [g,g], [g,[g,g]], ... until the dimension stops dropping.
inline std::vector<Subspace> lower_central_series(const LieAlgebra& L) {
  std::vector<Subspace> series{Subspace::full(L.dim())};
  const Subspace g = series.front();
  while (series.back().dim() > 0) {
    Subspace next = bracket_span(L, g, series.back());
    if (next.dim() == series.back().dim()) break;
    series.push_back(std::move(next));
  }
  return series;
}

inline bool is_nilpotent(const LieAlgebra& L) {
  return lower_central_series(L).back().dim() == 0;
}

inline std::vector<Subspace> derived_series(const LieAlgebra& L) {
  std::vector<Subspace> series{Subspace::full(L.dim())};
  while (series.back().dim() > 0) {
    Subspace next = bracket_span(L, series.back(), series.back());
    if (next.dim() == series.back().dim()) break;
    series.push_back(std::move(next));
  }
  return series;
}

inline bool is_solvable(const LieAlgebra& L) { return derived_series(L).back().dim() == 0; }

/// Restriction of the bracket to an ideal, in an orthonormal coordinate basis
/// of that ideal.
inline StructureTensor restricted_bracket(const LieAlgebra& L, const Subspace& ideal) {
  return L.tensor().restrict_to(ideal.orthonormal_basis());
}

struct NilradicalCertificate {
  double ideal_residual = 0.0;  // largest component of [g, n] outside n
  bool nilpotent = false;
  std::vector<double> witness_radii;  // spectral radius of ad y, y in a complement
  bool maximality_witnessed = true;
  bool automatic = false;
  std::vector<std::string> warnings;
};

struct Nilradical {
  Subspace n;
  NilradicalCertificate certificate;
};

inline constexpr double kWitnessRadius = 1e-8;

inline NilradicalCertificate certify_nilradical(const LieAlgebra& L, const Subspace& n) {
  NilradicalCertificate cert;
  const Subspace g = Subspace::full(L.dim());
  cert.ideal_residual = bracket_escape(L, g, n, n);
  if (n.dim() == 0) {
    cert.nilpotent = true;
  } else {
    LieAlgebra restricted = LieAlgebra::from_tensor(restricted_bracket(L, n));
    cert.nilpotent = is_nilpotent(restricted);
  }
  Matrix comp = n.complement_basis();
  for (Eigen::Index c = 0; c < comp.cols(); ++c) {
    double r = spectral_radius(L.ad(Vector(comp.col(c))));
    cert.witness_radii.push_back(r);
    if (r <= kWitnessRadius) cert.maximality_witnessed = false;
  }
  if (!cert.maximality_witnessed)
    cert.warnings.push_back("maximality witness failed: a complement basis vector is ad-nilpotent");
  return cert;
}

/// Nilradical with a certificate.
///
/// With `declared`, the subspace is certified and returned (hard error if it
/// is not a nilpotent ideal). Without it, the candidate is the common kernel
/// of x -> tr((ad y)^j ad x), j = 0..n-1, for a few fixed pseudo-random y:
/// on a solvable algebra the roots are linear forms and this kernel is
/// exactly the set of ad-nilpotent elements, i.e. the nilradical.
inline Nilradical nilradical(const LieAlgebra& L, const std::optional<Subspace>& declared = {}) {
  const int n = L.dim();
  Nilradical out;
  if (declared) {
    if (declared->ambient_dim() != n)
      throw InvariantError("declared nilradical lives in another space");
    out.n = *declared;
  } else {
    std::mt19937_64 rng(0x6e696c7261646963ULL);
    std::normal_distribution<double> normal;
    constexpr int kProbes = 3;
    Matrix rows(kProbes * n, n);
    for (int probe = 0; probe < kProbes; ++probe) {
      Vector y(n);
      for (int i = 0; i < n; ++i) y(i) = normal(rng);
      Matrix Y = L.ad(y);
      Matrix power = Matrix::Identity(n, n);
      for (int j = 0; j < n; ++j) {
        Vector row(n);
        for (int i = 0; i < n; ++i) row(i) = (power * L.ad(i)).trace();
        double s = row.norm();
        rows.row(probe * n + j) = s > 0.0 ? Vector(row / s) : row;
        power = power * Y;
        double pn = power.norm();
        if (pn > 0.0) power /= pn;
      }
    }
    out.n = Subspace(n, null_space(rows).basis);
    out.certificate.automatic = true;
  }
  NilradicalCertificate cert = certify_nilradical(L, out.n);
  cert.automatic = out.certificate.automatic;
  if (cert.automatic && !is_solvable(L))
    cert.warnings.push_back("automatic nilradical assumes a solvable algebra; declare it instead");
  if (cert.ideal_residual > 1e-9)
    throw InvariantError("nilradical candidate is not an ideal");
  if (!cert.nilpotent) throw InvariantError("nilradical candidate is not nilpotent");
  out.certificate = std::move(cert);
  return out;
}

}  // namespace homspace

#endif  // HOMSPACE_ALGEBRA_HPP
