#ifndef HOMSPACE_CHECK_HPP
#define HOMSPACE_CHECK_HPP

#include <algorithm>
#include <string>
#include <vector>

namespace homspace {

/// Stable identifiers naming the identity or construction a check verifies.
namespace anchors {
inline constexpr const char* kInput = "input-validation";
inline constexpr const char* kRicciFormula = "ricci-moment-killing-meancurvature";
inline constexpr const char* kRicciOracle = "ricci-nomizu-connection";
inline constexpr const char* kMomentTrace = "moment-trace-identity";
inline constexpr const char* kNormalizedMoment = "normalized-moment-map";
inline constexpr const char* kDerivationTrace = "derivation-trace-orthogonality";
inline constexpr const char* kStratum = "stratum-label-properties";
inline constexpr const char* kEbetaInequality = "ebeta-trace-inequality";
inline constexpr const char* kReductiveTrace = "reductive-complement-trace-identity";
inline constexpr const char* kExtension = "one-dimensional-extension";
inline constexpr const char* kSoliton = "algebraic-soliton";
inline constexpr const char* kLnm = "lnm-einstein-conditions";
inline constexpr const char* kExtensionRicci = "extension-ricci-prediction";
inline constexpr const char* kMeanCurvatureInequality = "mean-curvature-inequality";
inline constexpr const char* kStructure = "soliton-structure-conclusions";
inline constexpr const char* kWarping = "warping-function";

inline const std::vector<std::string>& all() {
  static const std::vector<std::string> names{
      kInput,          kRicciFormula,   kRicciOracle,  kMomentTrace,
      kNormalizedMoment, kDerivationTrace, kStratum,   kEbetaInequality,
      kReductiveTrace, kExtension,      kSoliton,      kLnm,
      kExtensionRicci, kMeanCurvatureInequality, kStructure, kWarping};
  return names;
}

inline bool known(const std::string& a) {
  const auto& v = all();
  return std::find(v.begin(), v.end(), a) != v.end();
}
}  // namespace anchors

/// One verified quantity. `pass` is decided by the producer, since some
/// checks are upper bounds (residuals) and others are sign conditions.
struct Check {
  std::string name;
  std::string anchor;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// value <= tol
inline Check at_most(std::string name, const char* anchor, double value, double tol) {
  return {std::move(name), anchor, value, tol, value <= tol};
}

/// value >= -tol
inline Check at_least_zero(std::string name, const char* anchor, double value, double tol) {
  return {std::move(name), anchor, value, tol, value >= -tol};
}

inline bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace homspace

#endif  // HOMSPACE_CHECK_HPP
