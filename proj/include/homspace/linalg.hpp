#ifndef HOMSPACE_LINALG_HPP
#define HOMSPACE_LINALG_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace homspace {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised when a value violates a structural invariant (bad input data).
class InvariantError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when two computations that must agree do not (an engine bug).
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative singular-value cutoff used for every rank decision.
inline constexpr double kRankCutoff = 1e-10;

/// Outcome of a thresholded SVD rank decision.
///
/// `gap` is the ratio between the smallest retained and the largest discarded
/// singular value (infinity when nothing was discarded or nothing retained),
/// so callers can report how clear-cut the decision was.
struct RankReport {
  int rank = 0;
  double largest = 0.0;
  double smallest_retained = 0.0;
  double largest_discarded = 0.0;
  double gap = std::numeric_limits<double>::infinity();
};

struct NullSpace {
  Matrix basis;  // orthonormal columns
  RankReport rank;
};

inline RankReport rank_decision(const Vector& singular_values,
                                double cutoff = kRankCutoff) {
  RankReport r;
  r.largest = singular_values.size() > 0 ? singular_values(0) : 0.0;
  double threshold = cutoff * r.largest;
  for (Eigen::Index i = 0; i < singular_values.size(); ++i) {
    if (r.largest > 0.0 && singular_values(i) > threshold) {
      ++r.rank;
      r.smallest_retained = singular_values(i);
    } else {
      r.largest_discarded = std::max(r.largest_discarded, singular_values(i));
    }
  }
  if (r.rank > 0 && r.largest_discarded > 0.0)
    r.gap = r.smallest_retained / r.largest_discarded;
  return r;
}

/// Orthonormal basis of {x : A x = 0}.
inline NullSpace null_space(const Matrix& A, double cutoff = kRankCutoff) {
  const Eigen::Index cols = A.cols();
  NullSpace out;
  if (A.rows() == 0 || cols == 0) {
    out.basis = Matrix::Identity(cols, cols);
    return out;
  }
  // Pad to at least `cols` rows so the thin SVD exposes all right vectors.
  Matrix padded = A;
  if (A.rows() < cols) {
    padded = Matrix::Zero(cols, cols);
    padded.topRows(A.rows()) = A;
  }
  Eigen::JacobiSVD<Matrix> svd(padded, Eigen::ComputeFullV);
  out.rank = rank_decision(svd.singularValues(), cutoff);
  out.basis = svd.matrixV().rightCols(cols - out.rank.rank);
  return out;
}

/// Orthonormal basis of the column span of A.
inline Matrix column_span(const Matrix& A, double cutoff = kRankCutoff,
                          RankReport* report = nullptr) {
  if (A.cols() == 0 || A.rows() == 0) return Matrix(A.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU);
  RankReport r = rank_decision(svd.singularValues(), cutoff);
  if (report) *report = r;
  return svd.matrixU().leftCols(r.rank);
}

inline Matrix sym(const Matrix& E) { return 0.5 * (E + E.transpose()); }
inline Matrix skew(const Matrix& E) { return 0.5 * (E - E.transpose()); }

inline Matrix commutator(const Matrix& A, const Matrix& B) { return A * B - B * A; }

inline Vector sorted_eigenvalues(const Matrix& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(symmetric), Eigen::EigenvaluesOnly);
  return es.eigenvalues();  // ascending
}

/// Matrix of a symmetric positive definite form restricted to and
/// orthonormalized on the columns of C: returns C L^{-T} with C^T G C = L L^T.
inline Matrix cholesky_orthonormalize(const Matrix& C, const Matrix& G) {
  if (C.cols() == 0) return C;
  Matrix gram = C.transpose() * G * C;
  Eigen::LLT<Matrix> llt(gram);
  if (llt.info() != Eigen::Success)
    throw InvariantError("metric is not positive definite on the given subspace");
  Matrix X = llt.matrixL().solve(C.transpose());
  return X.transpose();
}

inline double spectral_radius(const Matrix& A) {
  if (A.size() == 0) return 0.0;
  Eigen::EigenSolver<Matrix> es(A, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace homspace

#endif  // HOMSPACE_LINALG_HPP
