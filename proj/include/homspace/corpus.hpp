#ifndef HOMSPACE_CORPUS_HPP
#define HOMSPACE_CORPUS_HPP

#include "homspace/document.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <regex>
#include <string>
#include <vector>

namespace homspace {

class CorpusError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace corpus {

inline AlgebraDocument abelian(int n) {
  AlgebraDocument d;
  d.name = "abelian(" + std::to_string(n) + ")";
  d.dim = n;
  return d;
}

/// [e_{2i-1}, e_{2i}] = e_n for i = 1..k, n = 2k+1.
inline AlgebraDocument heisenberg(int n) {
  if (n < 3 || n % 2 == 0) throw CorpusError("heisenberg(n) needs odd n >= 3");
  AlgebraDocument d;
  d.name = "heisenberg(" + std::to_string(n) + ")";
  d.dim = n;
  for (int i = 0; i + 1 < n - 1; i += 2) d.brackets.push_back({i, i + 1, n - 1, 1.0});
  return d;
}

/// Real hyperbolic space as R xi acting by the identity on R^{n-1}.
inline AlgebraDocument hyperbolic(int n) {
  if (n < 2) throw CorpusError("hyperbolic(n) needs n >= 2");
  AlgebraDocument d;
  d.name = "hyperbolic(" + std::to_string(n) + ")";
  d.dim = n;
  for (int i = 1; i < n; ++i) d.brackets.push_back({0, i, i, 1.0});
  return d;
}

inline AlgebraDocument h3_soliton() {
  AlgebraDocument d = heisenberg(3);
  d.name = "h3_soliton";
  d.n_part = std::vector<int>{0, 1, 2};
  return d;
}

/// Heisenberg nilsoliton data: D = ((k+1)/2) diag(1,...,1,2), lambda = -(k+2)/2.
inline AlgebraDocument heisenberg_lnm(int n, int m) {
  AlgebraDocument d = heisenberg(n);
  d.name = "heisenberg_lnm(" + std::to_string(n) + "," + std::to_string(m) + ")";
  const double k = (n - 1) / 2.0;
  Matrix D = Matrix::Identity(n, n) * ((k + 1) / 2.0);
  D(n - 1, n - 1) = k + 1;
  d.derivation = D;
  d.lambda = -(k + 2) / 2.0;
  d.fiber_dim = m;
  d.alpha = 1.0 / std::sqrt(D.trace() - *d.lambda * m);
  return d;
}

inline AlgebraDocument h3_lnm_extension(int m) {
  AlgebraDocument d = heisenberg_lnm(3, m);
  d.name = "h3_lnm_extension(" + std::to_string(m) + ")";
  return d;
}

/// R^n with D = I and lambda = -1.
inline AlgebraDocument abelian_lnm(int n, int m) {
  AlgebraDocument d = abelian(n);
  d.name = "abelian_lnm(" + std::to_string(n) + "," + std::to_string(m) + ")";
  d.derivation = Matrix(Matrix::Identity(n, n));
  d.lambda = -1.0;
  d.fiber_dim = m;
  d.alpha = 1.0 / std::sqrt(n + m);
  return d;
}

/// hyperbolic(3) with the rotation of R^2 as derivation, lambda = -2.
inline AlgebraDocument hyperbolic_rotation_lnm(int m) {
  AlgebraDocument d = hyperbolic(3);
  d.name = "hyperbolic_rotation_lnm(" + std::to_string(m) + ")";
  Matrix D = Matrix::Zero(3, 3);
  D(2, 1) = 1.0;
  D(1, 2) = -1.0;
  d.derivation = D;
  d.lambda = -2.0;
  d.fiber_dim = m;
  d.alpha = 1.0 / std::sqrt(2.0 * m);
  return d;
}

inline AlgebraDocument so3() {
  AlgebraDocument d;
  d.name = "so3";
  d.dim = 3;
  d.brackets = {{0, 1, 2, 1.0}, {0, 2, 1, -1.0}, {1, 2, 0, 1.0}};
  d.metric = Matrix(Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal());
  d.declared_nilradical = std::vector<int>{};
  return d;
}

/// Round sphere as so(3)/so(2).
inline AlgebraDocument sphere2() {
  AlgebraDocument d = so3();
  d.name = "sphere2";
  d.metric.reset();
  d.isotropy = std::vector<int>{2};
  return d;
}

inline AlgebraDocument sol() {
  AlgebraDocument d;
  d.name = "sol";
  d.dim = 3;
  d.brackets = {{0, 1, 1, 1.0}, {0, 2, 2, -1.0}};
  return d;
}

/// so(2) acting on h3 by rotation of the first two generators, modulo so(2).
inline AlgebraDocument rotational_h3() {
  AlgebraDocument d;
  d.name = "rotational_h3";
  d.dim = 4;
  d.brackets = {{0, 1, 2, 1.0}, {0, 3, 1, -1.0}, {1, 3, 0, 1.0}};
  d.isotropy = std::vector<int>{3};
  return d;
}

inline AlgebraDocument rotational_h3_lnm(int m) {
  AlgebraDocument d = rotational_h3();
  d.name = "rotational_h3_lnm(" + std::to_string(m) + ")";
  Matrix D = Matrix::Zero(4, 4);
  D(0, 0) = D(1, 1) = 1.0;
  D(2, 2) = 2.0;
  d.derivation = D;
  d.lambda = -1.5;
  d.fiber_dim = m;
  d.alpha = 1.0 / std::sqrt(4.0 + 1.5 * m);
  return d;
}

/// Solvable with abelian nilradical span(z, w) and [a, b] = z.
inline AlgebraDocument solvable_lambda1() {
  AlgebraDocument d;
  d.name = "solvable_lambda1";
  d.dim = 4;
  // a = e1, b = e2, z = e3, w = e4
  d.brackets = {{0, 1, 2, 1.0}, {0, 2, 2, 1.0}, {0, 3, 3, 1.0}, {1, 2, 2, 1.0}, {1, 3, 3, -1.0}};
  return d;
}

/// R xi acting on h3 by diag(1, 1, 2).
inline AlgebraDocument extension_h3() {
  AlgebraDocument d;
  d.name = "extension_h3";
  d.dim = 4;
  d.brackets = {{0, 1, 1, 1.0}, {0, 2, 2, 1.0}, {0, 3, 3, 2.0}, {1, 2, 3, 1.0}};
  return d;
}

struct Entry {
  std::string name;
  std::string summary;
  std::vector<int> defaults;
  std::function<AlgebraDocument(const std::vector<int>&)> make;
};

inline const std::vector<Entry>& registry() {
  static const std::vector<Entry> entries{
      {"abelian", "abelian(n): R^n", {3}, [](const auto& a) { return abelian(a[0]); }},
      {"heisenberg", "heisenberg(n): odd n = 2k+1", {3}, [](const auto& a) { return heisenberg(a[0]); }},
      {"hyperbolic", "hyperbolic(n): R acting by identity on R^{n-1}", {3},
       [](const auto& a) { return hyperbolic(a[0]); }},
      {"h3_soliton", "h3_soliton: Heisenberg nilsoliton", {}, [](const auto&) { return h3_soliton(); }},
      {"h3_lnm_extension", "h3_lnm_extension(m): h3 with lnm data", {2},
       [](const auto& a) { return h3_lnm_extension(a[0]); }},
      {"heisenberg_lnm", "heisenberg_lnm(n,m): Heisenberg with lnm data", {5, 2},
       [](const auto& a) { return heisenberg_lnm(a[0], a[1]); }},
      {"abelian_lnm", "abelian_lnm(n,m): R^n with D = I", {2, 2},
       [](const auto& a) { return abelian_lnm(a[0], a[1]); }},
      {"hyperbolic_rotation_lnm", "hyperbolic_rotation_lnm(m): hyperbolic(3) with skew D", {2},
       [](const auto& a) { return hyperbolic_rotation_lnm(a[0]); }},
      {"rotational_h3", "rotational_h3: so(2) x h3 modulo so(2)", {}, [](const auto&) { return rotational_h3(); }},
      {"rotational_h3_lnm", "rotational_h3_lnm(m): rotational_h3 with lnm data", {2},
       [](const auto& a) { return rotational_h3_lnm(a[0]); }},
      {"so3", "so3: so(3) with metric diag(1,2,3)", {}, [](const auto&) { return so3(); }},
      {"sphere2", "sphere2: so(3)/so(2)", {}, [](const auto&) { return sphere2(); }},
      {"sol", "sol: R acting by diag(1,-1) on R^2", {}, [](const auto&) { return sol(); }},
      {"solvable_lambda1", "solvable_lambda1: abelian nilradical, nonzero projected bracket", {},
       [](const auto&) { return solvable_lambda1(); }},
      {"extension_h3", "extension_h3: R acting by diag(1,1,2) on h3", {},
       [](const auto&) { return extension_h3(); }},
  };
  return entries;
}

inline std::string available_names() {
  std::string s;
  for (const auto& e : registry()) s += (s.empty() ? "" : ", ") + e.name;
  return s;
}

/// Resolves `name` or `name(a,b)` to a document.
inline AlgebraDocument lookup(const std::string& spec) {
  static const std::regex form(R"(^\s*([a-z0-9_]+)\s*(?:\(\s*([0-9]+(?:\s*,\s*[0-9]+)*)\s*\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(spec, m, form))
    throw CorpusError("malformed corpus name '" + spec + "'; available: " + available_names());
  const std::string name = m[1];
  for (const auto& e : registry()) {
    if (e.name != name) continue;
    std::vector<int> args;
    if (m[2].matched) {
      std::string list = m[2];
      std::regex num(R"([0-9]+)");
      for (auto it = std::sregex_iterator(list.begin(), list.end(), num); it != std::sregex_iterator(); ++it)
        args.push_back(std::stoi(it->str()));
    }
    if (args.empty()) args = e.defaults;
    if (args.size() != e.defaults.size())
      throw CorpusError("'" + name + "' takes " + std::to_string(e.defaults.size()) + " argument(s)");
    return e.make(args);
  }
  throw CorpusError("unknown corpus entry '" + name + "'; available: " + available_names());
}

/// Instances swept by the audit and acceptance runs.
inline std::vector<std::string> standard_instances() {
  return {"abelian(3)",       "abelian(5)",       "heisenberg(3)",       "heisenberg(5)",
          "heisenberg(7)",    "hyperbolic(2)",    "hyperbolic(3)",       "hyperbolic(5)",
          "h3_soliton",       "sphere2",          "so3",                 "sol",
          "rotational_h3",    "solvable_lambda1", "extension_h3",        "h3_lnm_extension(2)",
          "h3_lnm_extension(3)", "h3_lnm_extension(5)", "heisenberg_lnm(5,2)", "abelian_lnm(2,3)",
          "hyperbolic_rotation_lnm(2)", "rotational_h3_lnm(2)"};
}

}  // namespace corpus
}  // namespace homspace

#endif  // HOMSPACE_CORPUS_HPP
