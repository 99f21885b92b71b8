#ifndef HOMSPACE_TESTS_SUPPORT_HPP
#define HOMSPACE_TESTS_SUPPORT_HPP

// Independent oracles and random generators for the test suites. Nothing in
// here calls the library's curvature code: the oracles work directly in the
// supplied (generally non-orthonormal) basis of p with the raw metric.

#include "homspace/homspace.hpp"

#include <random>
#include <string>
#include <vector>

namespace oracle {

using homspace::LieAlgebra;
using homspace::Matrix;
using homspace::Vector;

/// Raw reductive data: g, columns of K spanning k, columns of P spanning p,
/// metric G on p in the P basis.
struct Space {
  LieAlgebra g;
  Matrix K;
  Matrix P;
  Matrix G;

  int dp() const { return static_cast<int>(P.cols()); }
  int dk() const { return static_cast<int>(K.cols()); }

  Matrix winv() const {
    Matrix W(g.dim(), dp() + dk());
    W << P, K;
    return W.inverse();
  }
  Vector p_coords(const Vector& v) const { return winv().topRows(dp()) * v; }
  Vector k_vector(const Vector& v) const { return K * (winv().bottomRows(dk()) * v); }

  Vector br_p(const Vector& x, const Vector& y) const { return p_coords(g.bracket(P * x, P * y)); }

  /// Koszul term U(x, y) from 2<U(x,y), z> = <[z,x]_p, y> + <x, [z,y]_p>.
  Vector U(const Vector& x, const Vector& y) const {
    Vector rhs(dp());
    for (int c = 0; c < dp(); ++c) {
      Vector z = Vector::Unit(dp(), c);
      rhs(c) = 0.5 * (br_p(z, x).dot(G * y) + x.dot(G * br_p(z, y)));
    }
    return G.ldlt().solve(rhs);
  }

  Vector Lambda(const Vector& x, const Vector& y) const { return 0.5 * br_p(x, y) + U(x, y); }

  Matrix LambdaMatrix(const Vector& x) const {
    Matrix L(dp(), dp());
    for (int c = 0; c < dp(); ++c) L.col(c) = Lambda(x, Vector::Unit(dp(), c));
    return L;
  }

  /// R(x,y)z = [Lambda(x), Lambda(y)] z - Lambda([x,y]_p) z - [[x,y]_k, z]_p
  Vector R(const Vector& x, const Vector& y, const Vector& z) const {
    Vector xy_k = k_vector(g.bracket(P * x, P * y));
    return Lambda(x, Lambda(y, z)) - Lambda(y, Lambda(x, z)) - Lambda(br_p(x, y), z) -
           p_coords(g.bracket(xy_k, P * z));
  }
};

inline Space from(const homspace::HomogeneousSpace& hs) {
  return {hs.algebra(), hs.isotropy().basis(), hs.complement().basis(), hs.metric()};
}

/// Ricci operator in the supplied basis: ric(y, z) = tr(x -> R(x, y) z),
/// raised with the metric.
inline Matrix ricci(const Space& s) {
  const int d = s.dp();
  Matrix form(d, d);
  for (int b = 0; b < d; ++b)
    for (int c = 0; c < d; ++c) {
      double t = 0.0;
      for (int a = 0; a < d; ++a)
        t += s.R(Vector::Unit(d, a), Vector::Unit(d, b), Vector::Unit(d, c))(a);
      form(b, c) = t;
    }
  return s.G.ldlt().solve(form);
}

/// Sectional curvature of the plane spanned by x, y.
inline double sectional(const Space& s, const Vector& x, const Vector& y) {
  double num = s.R(x, y, y).dot(s.G * x);
  double den = x.dot(s.G * x) * y.dot(s.G * y) - std::pow(x.dot(s.G * y), 2);
  return num / den;
}

/// div T = sum_a (nabla_{f_a} T) f_a over a metric-orthonormal frame built
/// from the eigenvectors of G. Supplied coordinates.
inline Vector divergence(const Space& s, const Matrix& T) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.G);
  Matrix F = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  Vector out = Vector::Zero(s.dp());
  for (int a = 0; a < s.dp(); ++a) {
    Vector f = F.col(a);
    Matrix L = s.LambdaMatrix(f);
    out += (L * T - T * L) * f;
  }
  return out;
}

/// Mean curvature H with <H, x> = tr ad x restricted to p, supplied coordinates.
inline Vector mean_curvature(const Space& s) {
  Vector form(s.dp());
  for (int c = 0; c < s.dp(); ++c) {
    double t = 0.0;
    for (int a = 0; a < s.dp(); ++a)
      t += s.br_p(Vector::Unit(s.dp(), c), Vector::Unit(s.dp(), a))(a);
    form(c) = t;
  }
  return s.G.ldlt().solve(form);
}

}  // namespace oracle

namespace gen {

using homspace::Matrix;
using homspace::Vector;

inline Matrix gaussian(std::mt19937& rng, int r, int c) {
  std::normal_distribution<double> n;
  Matrix M(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) M(i, j) = n(rng);
  return M;
}

inline Matrix orthogonal(std::mt19937& rng, int n) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(rng, n, n));
  Matrix Q = qr.householderQ();
  Vector s = qr.matrixQR().diagonal().array().sign();
  return Q * s.asDiagonal();
}

inline Matrix spd(std::mt19937& rng, int n, double spread = 1.0) {
  Matrix A = gaussian(rng, n, n);
  return Matrix::Identity(n, n) + spread * (A * A.transpose()) / n;
}

/// Near-identity invertible matrix.
inline Matrix near_identity(std::mt19937& rng, int n, double eps) {
  return Matrix::Identity(n, n) + eps * gaussian(rng, n, n);
}

/// Random metric on p invariant under ad(k), near G0.
inline Matrix invariant_metric(std::mt19937& rng, const homspace::HomogeneousSpace& hs, double eps = 0.5) {
  const int d = hs.dim();
  const int dk = hs.isotropy().dim();
  oracle::Space s = oracle::from(hs);
  std::vector<Matrix> syms;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      Matrix S = Matrix::Zero(d, d);
      S(i, j) = S(j, i) = 1.0;
      syms.push_back(S);
    }
  Matrix A = Matrix::Zero(std::max(1, dk) * d * d, static_cast<int>(syms.size()));
  for (int j = 0; j < dk; ++j) {
    Matrix adz(d, d);
    for (int c = 0; c < d; ++c)
      adz.col(c) = s.p_coords(hs.algebra().bracket(s.K.col(j), s.P.col(c)));
    for (std::size_t t = 0; t < syms.size(); ++t) {
      Matrix C = adz.transpose() * syms[t] + syms[t] * adz;
      A.block(j * d * d, static_cast<int>(t), d * d, 1) = Eigen::Map<Vector>(C.data(), d * d);
    }
  }
  Matrix N = homspace::null_space(A).basis;
  std::normal_distribution<double> nd;
  for (double scale = eps;; scale /= 2) {
    Matrix G = hs.metric();
    for (Eigen::Index c = 0; c < N.cols(); ++c) {
      double r = nd(rng) * scale;
      for (std::size_t t = 0; t < syms.size(); ++t) G += r * N(static_cast<Eigen::Index>(t), c) * syms[t];
    }
    if (homspace::sorted_eigenvalues(G)(0) > 0.2) return G;
  }
}

/// Random nonzero element of span(ders) with Gaussian coefficients.
inline Matrix combination(std::mt19937& rng, const std::vector<Matrix>& ders) {
  std::normal_distribution<double> nd;
  Matrix D = Matrix::Zero(ders.at(0).rows(), ders.at(0).cols());
  for (const auto& b : ders) D += nd(rng) * b;
  return D;
}

}  // namespace gen

#endif  // HOMSPACE_TESTS_SUPPORT_HPP
