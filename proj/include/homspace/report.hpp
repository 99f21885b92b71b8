#ifndef HOMSPACE_REPORT_HPP
#define HOMSPACE_REPORT_HPP

#include "homspace/check.hpp"
#include "homspace/document.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace homspace {

/// Hex SHA-256.
inline std::string text_digest(const std::string& text) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

/// Digest of the canonical serialization.
inline std::string document_digest(const AlgebraDocument& doc) {
  return text_digest(serialize_document(doc));
}

inline nlohmann::ordered_json matrix_json(const Matrix& M) {
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < M.cols(); ++c) row.push_back(M(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline nlohmann::ordered_json vector_json(const Vector& v) {
  auto out = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> flags;
  std::string input;
  std::string digest;
  std::vector<Check> checks;
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<std::string> warnings;

  bool verdict() const { return all_pass(checks); }

  void add(const Check& c) { checks.push_back(c); }
  void add(const std::vector<Check>& cs) { checks.insert(checks.end(), cs.begin(), cs.end()); }

  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    auto fl = nlohmann::ordered_json::object();
    for (const auto& [k, v] : flags) fl[k] = v;
    j["flags"] = fl;
    j["input"] = input;
    j["input_digest"] = digest;
    auto cs = nlohmann::ordered_json::array();
    for (const Check& c : checks)
      cs.push_back({{"name", c.name}, {"paper_anchor", c.anchor}, {"value", c.value},
                    {"tolerance", c.tolerance}, {"pass", c.pass}});
    j["checks"] = cs;
    j["results"] = results;
    j["warnings"] = warnings;
    j["verdict"] = verdict() ? "pass" : "fail";
    return j;
  }

  std::string machine() const { return to_json().dump() + "\n"; }

  std::string text() const {
    std::ostringstream out;
    out << "command: " << command << "\n";
    out << "input: " << input << "\n";
    out << "digest: " << digest << "\n";
    for (const auto& [k, v] : flags) out << "flag " << k << " = " << v << "\n";
    for (const auto& [k, v] : results.items()) out << k << ": " << v.dump() << "\n";
    for (const Check& c : checks) {
      out << (c.pass ? "PASS " : "FAIL ") << c.name << "  value=" << detail::format_number(c.value)
          << "  tol=" << detail::format_number(c.tolerance) << "  [" << c.anchor << "]\n";
    }
    for (const auto& w : warnings) out << "warning: " << w << "\n";
    out << "verdict: " << (verdict() ? "pass" : "fail") << "\n";
    return out.str();
  }
};

}  // namespace homspace

#endif  // HOMSPACE_REPORT_HPP
