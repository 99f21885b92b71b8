#ifndef HOMSPACE_DOCUMENT_HPP
#define HOMSPACE_DOCUMENT_HPP

#include "homspace/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace homspace {

/// Parse failure anchored to a document line (1-based) and field.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& field, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + field + ": " + message),
        line_(line),
        field_(field) {}
  int line() const { return line_; }
  const std::string& field() const { return field_; }

 private:
  int line_;
  std::string field_;
};

/// Textual description of a homogeneous space plus optional extension data.
/// Indices are zero-based here and one-based in the text.
struct AlgebraDocument {
  std::string name = "unnamed";
  int dim = 0;
  std::vector<StructureConstant> brackets;
  std::optional<Matrix> metric;  // nullopt means identity
  std::optional<std::vector<int>> isotropy;
  std::optional<std::vector<int>> h_part;
  std::optional<std::vector<int>> n_part;
  std::optional<std::vector<int>> declared_nilradical;
  std::optional<Matrix> derivation;
  std::optional<double> lambda;
  std::optional<int> fiber_dim;
  std::optional<double> alpha;
  std::map<std::string, double> tolerances;  // identity, flow, jacobi

  std::vector<int> complement_indices() const {
    std::vector<int> p;
    std::set<int> k(isotropy ? isotropy->begin() : std::vector<int>::const_iterator{},
                    isotropy ? isotropy->end() : std::vector<int>::const_iterator{});
    for (int i = 0; i < dim; ++i)
      if (!k.count(i)) p.push_back(i);
    return p;
  }
  double tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
  }
};

namespace detail {

/// Shortest decimal text that reads back to the same double.
inline std::string format_number(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct Value;
using Array = std::vector<Value>;
struct Value {
  std::variant<std::string, Array> v;  // scalar token or array
  bool is_array() const { return std::holds_alternative<Array>(v); }
};

class ValueParser {
 public:
  ValueParser(std::string_view text, int line, std::string field)
      : s_(text), line_(line), field_(std::move(field)) {}

  Value parse() {
    Value v = value();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing text");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, field_, msg); }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  Value value() {
    skip();
    if (pos_ >= s_.size()) fail("missing value");
    if (s_[pos_] == '[') {
      ++pos_;
      Array items;
      skip();
      if (pos_ < s_.size() && s_[pos_] == ']') {
        ++pos_;
        return {items};
      }
      while (true) {
        items.push_back(value());
        skip();
        if (pos_ >= s_.size()) fail("unterminated array");
        if (s_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (s_[pos_] == ']') {
          ++pos_;
          return {items};
        }
        fail("expected ',' or ']'");
      }
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ',' && s_[pos_] != ']' && s_[pos_] != '[' &&
           !std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (start == pos_) fail("empty value");
    return {std::string(s_.substr(start, pos_ - start))};
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
  std::string field_;
};

inline double to_number(const std::string& tok, int line, const std::string& field) {
  auto parse_double = [&](std::string_view t) {
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
      throw ParseError(line, field, "not a number: '" + tok + "'");
    return v;
  };
  auto slash = tok.find('/');
  if (slash == std::string::npos) return parse_double(tok);
  double num = parse_double(std::string_view(tok).substr(0, slash));
  double den = parse_double(std::string_view(tok).substr(slash + 1));
  if (den == 0.0) throw ParseError(line, field, "zero denominator in '" + tok + "'");
  return num / den;
}

inline int to_int(const std::string& tok, int line, const std::string& field) {
  int v = 0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    throw ParseError(line, field, "not an integer: '" + tok + "'");
  return v;
}

inline const std::string& scalar(const Value& v, int line, const std::string& field) {
  if (v.is_array()) throw ParseError(line, field, "expected a scalar");
  return std::get<std::string>(v.v);
}

inline const Array& array(const Value& v, int line, const std::string& field) {
  if (!v.is_array()) throw ParseError(line, field, "expected an array");
  return std::get<Array>(v.v);
}

inline Matrix to_matrix(const Value& v, int line, const std::string& field) {
  const Array& rows = array(v, line, field);
  const auto n = static_cast<Eigen::Index>(rows.size());
  Matrix M(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Array& row = array(rows[r], line, field);
    if (static_cast<Eigen::Index>(row.size()) != n)
      throw ParseError(line, field, "matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) M(r, c) = to_number(scalar(row[c], line, field), line, field);
  }
  return M;
}

inline std::vector<int> to_index_list(const Value& v, int line, const std::string& field, int dim) {
  std::vector<int> out;
  std::set<int> seen;
  for (const Value& item : array(v, line, field)) {
    int i = to_int(scalar(item, line, field), line, field);
    if (i < 1 || i > dim)
      throw ParseError(line, field, "index " + std::to_string(i) + " out of range 1.." + std::to_string(dim));
    if (!seen.insert(i).second) throw ParseError(line, field, "repeated index " + std::to_string(i));
    out.push_back(i - 1);
  }
  return out;
}

}  // namespace detail

/// Parses the line-oriented `key: value` document format.
///
/// Arrays use square brackets and may continue over several lines until the
/// brackets balance. Numbers are decimals or exact fractions `p/q`. Lines
/// starting with `#` are comments. Indices are one-based.
inline AlgebraDocument parse_document(const std::string& text) {
  using namespace detail;
  struct Entry {
    int line;
    std::string text;
  };
  std::map<std::string, Entry> entries;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  std::string pending_key;
  Entry pending{0, ""};
  int depth = 0;
  auto commit = [&]() {
    if (!entries.emplace(pending_key, pending).second)
      throw ParseError(pending.line, pending_key, "key given twice");
    pending_key.clear();
  };
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!pending_key.empty()) {
      pending.text += " " + line;
    } else {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto colon = line.find(':');
      if (colon == std::string::npos) throw ParseError(lineno, "document", "expected 'key: value'");
      std::string key = line.substr(first, colon - first);
      while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.pop_back();
      if (key.empty()) throw ParseError(lineno, "document", "empty key");
      pending_key = key;
      pending = {lineno, line.substr(colon + 1)};
      depth = 0;
      line = pending.text;
    }
    for (char ch : line) depth += ch == '[' ? 1 : ch == ']' ? -1 : 0;
    if (depth < 0) throw ParseError(pending.line, pending_key, "unbalanced ']'");
    if (depth == 0) commit();
  }
  if (!pending_key.empty()) throw ParseError(pending.line, pending_key, "unterminated array");

  AlgebraDocument doc;
  auto take = [&](const std::string& key) -> std::optional<std::pair<Value, int>> {
    auto it = entries.find(key);
    if (it == entries.end()) return std::nullopt;
    Value v = ValueParser(it->second.text, it->second.line, key).parse();
    int line = it->second.line;
    entries.erase(it);
    return std::make_pair(std::move(v), line);
  };

  auto dim_entry = take("dim");
  if (!dim_entry) throw ParseError(lineno, "dim", "missing required key");
  doc.dim = to_int(scalar(dim_entry->first, dim_entry->second, "dim"), dim_entry->second, "dim");
  if (doc.dim <= 0) throw ParseError(dim_entry->second, "dim", "must be positive");

  if (auto it = entries.find("name"); it != entries.end()) {
    std::string v = it->second.text;
    auto a = v.find_first_not_of(" \t\r");
    auto b = v.find_last_not_of(" \t\r");
    if (a == std::string::npos) throw ParseError(it->second.line, "name", "empty name");
    doc.name = v.substr(a, b - a + 1);
    entries.erase(it);
  }

  if (auto e = take("brackets")) {
    std::set<std::tuple<int, int, int>> seen;
    for (const Value& item : array(e->first, e->second, "brackets")) {
      const Array& q = array(item, e->second, "brackets");
      if (q.size() != 4) throw ParseError(e->second, "brackets", "entries are [i, j, k, c]");
      int idx[3];
      for (int t = 0; t < 3; ++t) {
        idx[t] = to_int(scalar(q[t], e->second, "brackets"), e->second, "brackets");
        if (idx[t] < 1 || idx[t] > doc.dim)
          throw ParseError(e->second, "brackets",
                           "index " + std::to_string(idx[t]) + " out of range 1.." + std::to_string(doc.dim));
      }
      if (idx[0] >= idx[1]) throw ParseError(e->second, "brackets", "entries need i < j");
      if (!seen.insert({idx[0], idx[1], idx[2]}).second)
        throw ParseError(e->second, "brackets", "duplicate entry for the same (i, j, k)");
      double c = to_number(scalar(q[3], e->second, "brackets"), e->second, "brackets");
      doc.brackets.push_back({idx[0] - 1, idx[1] - 1, idx[2] - 1, c});
    }
  }
  if (auto e = take("isotropy")) doc.isotropy = to_index_list(e->first, e->second, "isotropy", doc.dim);
  if (auto e = take("metric")) {
    if (!e->first.is_array()) {
      if (scalar(e->first, e->second, "metric") != "identity")
        throw ParseError(e->second, "metric", "expected 'identity' or a matrix");
    } else {
      doc.metric = to_matrix(e->first, e->second, "metric");
      if (doc.metric->rows() != static_cast<Eigen::Index>(doc.complement_indices().size()))
        throw ParseError(e->second, "metric", "metric size must equal dim - dim(isotropy)");
    }
  }
  if (auto e = take("h_part")) doc.h_part = to_index_list(e->first, e->second, "h_part", doc.dim);
  if (auto e = take("n_part")) doc.n_part = to_index_list(e->first, e->second, "n_part", doc.dim);
  if (auto e = take("declared_nilradical"))
    doc.declared_nilradical = to_index_list(e->first, e->second, "declared_nilradical", doc.dim);
  if (auto e = take("derivation")) {
    doc.derivation = to_matrix(e->first, e->second, "derivation");
    if (doc.derivation->rows() != doc.dim)
      throw ParseError(e->second, "derivation", "derivation must be dim x dim");
  }
  if (auto e = take("lambda")) doc.lambda = to_number(scalar(e->first, e->second, "lambda"), e->second, "lambda");
  if (auto e = take("alpha")) doc.alpha = to_number(scalar(e->first, e->second, "alpha"), e->second, "alpha");
  if (auto e = take("fiber_dim")) {
    doc.fiber_dim = to_int(scalar(e->first, e->second, "fiber_dim"), e->second, "fiber_dim");
    if (*doc.fiber_dim < 1) throw ParseError(e->second, "fiber_dim", "must be positive");
  }
  for (const char* key : {"identity", "flow", "jacobi"}) {
    std::string full = std::string("tolerance.") + key;
    if (auto e = take(full)) {
      double t = to_number(scalar(e->first, e->second, full), e->second, full);
      if (!(t > 0.0)) throw ParseError(e->second, full, "tolerance must be positive");
      doc.tolerances[key] = t;
    }
  }
  if (!entries.empty())
    throw ParseError(entries.begin()->second.line, entries.begin()->first, "unknown key");
  return doc;
}

/// Canonical text: fixed key order, brackets sorted, shortest round-trip numbers.
inline std::string serialize_document(const AlgebraDocument& doc) {
  using detail::format_number;
  std::ostringstream out;
  auto index_list = [&](const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i] + 1);
    return s + "]";
  };
  auto matrix = [&](const Matrix& M) {
    std::string s = "[";
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      s += r ? ", [" : "[";
      for (Eigen::Index c = 0; c < M.cols(); ++c) s += (c ? ", " : "") + format_number(M(r, c));
      s += "]";
    }
    return s + "]";
  };
  auto sorted = doc.brackets;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j, a.k) < std::tie(b.i, b.j, b.k);
  });
  out << "name: " << doc.name << "\n";
  out << "dim: " << doc.dim << "\n";
  out << "brackets: [";
  for (std::size_t t = 0; t < sorted.size(); ++t) {
    const auto& e = sorted[t];
    out << (t ? ", " : "") << "[" << e.i + 1 << ", " << e.j + 1 << ", " << e.k + 1 << ", "
        << format_number(e.c) << "]";
  }
  out << "]\n";
  out << "metric: " << (doc.metric ? matrix(*doc.metric) : std::string("identity")) << "\n";
  if (doc.isotropy) out << "isotropy: " << index_list(*doc.isotropy) << "\n";
  if (doc.h_part) out << "h_part: " << index_list(*doc.h_part) << "\n";
  if (doc.n_part) out << "n_part: " << index_list(*doc.n_part) << "\n";
  if (doc.declared_nilradical) out << "declared_nilradical: " << index_list(*doc.declared_nilradical) << "\n";
  if (doc.derivation) out << "derivation: " << matrix(*doc.derivation) << "\n";
  if (doc.lambda) out << "lambda: " << format_number(*doc.lambda) << "\n";
  if (doc.fiber_dim) out << "fiber_dim: " << *doc.fiber_dim << "\n";
  if (doc.alpha) out << "alpha: " << format_number(*doc.alpha) << "\n";
  for (const auto& [k, v] : doc.tolerances) out << "tolerance." << k << ": " << format_number(v) << "\n";
  return out.str();
}

inline LieAlgebra to_algebra(const AlgebraDocument& doc) {
  return LieAlgebra(doc.dim, doc.brackets);
}

/// Builds the homogeneous space; throws InvariantError if any invariant fails.
inline HomogeneousSpace to_space(const AlgebraDocument& doc) {
  LieAlgebra g = to_algebra(doc);
  const int n = doc.dim;
  std::vector<int> pidx = doc.complement_indices();
  Subspace k = doc.isotropy ? Subspace::from_indices(n, *doc.isotropy) : Subspace::zero(n);
  Subspace p = Subspace::from_indices(n, pidx);
  const auto dp = static_cast<Eigen::Index>(pidx.size());
  Matrix G = doc.metric ? *doc.metric : Matrix(Matrix::Identity(dp, dp));
  std::optional<Splitting> split;
  if (doc.n_part) {
    std::vector<int> h;
    if (doc.h_part) {
      h = *doc.h_part;
    } else {
      std::set<int> nset(doc.n_part->begin(), doc.n_part->end());
      for (int i : pidx)
        if (!nset.count(i)) h.push_back(i);
    }
    split = Splitting{Subspace::from_indices(n, h), Subspace::from_indices(n, *doc.n_part)};
  } else if (doc.h_part) {
    throw InvariantError("h_part given without n_part");
  }
  return HomogeneousSpace(std::move(g), std::move(k), std::move(p), std::move(G), std::move(split),
                          doc.tolerance("jacobi", kJacobiTolerance));
}

/// Declared nilradical as a subspace, if the document carries one.
inline std::optional<Subspace> declared_nilradical(const AlgebraDocument& doc) {
  if (!doc.declared_nilradical) return std::nullopt;
  return Subspace::from_indices(doc.dim, *doc.declared_nilradical);
}

}  // namespace homspace

#endif  // HOMSPACE_DOCUMENT_HPP
