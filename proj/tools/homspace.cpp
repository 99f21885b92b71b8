// homspace: command-line front end for the homspace library.
//
//   homspace <command> [flags] [file|corpus:<name>]
//
// Exit status: 0 all checks pass, 1 a check failed, 2 input error.

#include "homspace/homspace.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace homspace;

struct Settings {
  std::string command;
  std::string input;
  double tol_identity = 1e-9;
  double tol_flow = 1e-6;
  double step = 0.01;
  int max_iter = 200000;
  unsigned seed = 1;
  std::string output = "text";
  std::optional<double> lambda;
  std::optional<int> m;
  std::optional<double> alpha;
  bool all_corpus = false;
  bool tol_identity_given = false;
  bool tol_flow_given = false;
};

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

AlgebraDocument load(const std::string& input) {
  if (input.empty()) throw InputError("no input given (file path, '-' or corpus:<name>)");
  if (input.rfind("corpus:", 0) == 0) return corpus::lookup(input.substr(7));
  std::stringstream buf;
  if (input == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(input);
    if (!in) throw InputError("cannot read '" + input + "'");
    buf << in.rdbuf();
  }
  return parse_document(buf.str());
}

double identity_tol(const Settings& s, const AlgebraDocument& doc) {
  return s.tol_identity_given ? s.tol_identity : doc.tolerance("identity", s.tol_identity);
}

double flow_tol(const Settings& s, const AlgebraDocument& doc) {
  return s.tol_flow_given ? s.tol_flow : doc.tolerance("flow", s.tol_flow);
}

FlowOptions flow_options(const Settings& s, const AlgebraDocument& doc) {
  FlowOptions f;
  f.step = s.step;
  f.max_iter = s.max_iter;
  f.tol = std::min(1e-8, flow_tol(s, doc));
  return f;
}

double require_lambda(const Settings& s, const AlgebraDocument& doc) {
  if (s.lambda) return *s.lambda;
  if (doc.lambda) return *doc.lambda;
  throw InputError("lambda is required (--lambda or document key 'lambda')");
}

int require_m(const Settings& s, const AlgebraDocument& doc) {
  if (s.m) return *s.m;
  if (doc.fiber_dim) return *doc.fiber_dim;
  throw InputError("fiber dimension is required (--m or document key 'fiber_dim')");
}

const Matrix& require_derivation(const AlgebraDocument& doc) {
  if (!doc.derivation) throw InputError("the document carries no 'derivation'");
  return *doc.derivation;
}

std::vector<Check> base_checks(const HomogeneousSpace& hs, double tol) {
  std::vector<Check> out;
  Matrix ric = ricci(hs);
  out.push_back(at_most("ricci.two_route", anchors::kRicciOracle,
                        hs.metric_norm(Matrix(ric - ricci_via_connection(hs))), tol));
  Matrix ric_on = ricci_on(hs);
  out.push_back(at_most("ricci.self_adjoint", anchors::kRicciFormula,
                        (ric_on - ric_on.transpose()).norm(), tol));
  const StructureTensor& mu = hs.mu_p();
  Matrix M = mu.moment();
  out.push_back(at_most("moment.trace_identity", anchors::kMomentTrace,
                        mu.moment_identity_residual(M), tol * std::max(1.0, mu.norm2())));
  if (mu.norm2() > 0.0)
    out.push_back(at_most("moment.normalized_trace", anchors::kNormalizedMoment,
                          std::abs(normalized_moment(mu).trace() + 1.0), tol));
  Matrix adH = mu.ad(mean_curvature_on(hs));
  Matrix T = ric_on + sym(adH);
  DerivationBasis ders = derivations_preserving(hs.algebra(), hs.isotropy());
  double worst = 0.0;
  for (const Matrix& D : ders.basis) worst = std::max(worst, std::abs((T * hs.induced_on(D)).trace()));
  out.push_back(at_most("derivation.trace_orthogonality", anchors::kDerivationTrace, worst, tol));
  return out;
}

void describe_space(Report& r, const HomogeneousSpace& hs) {
  r.results["dim_g"] = hs.algebra().dim();
  r.results["dim_k"] = hs.isotropy().dim();
  r.results["dim_p"] = hs.dim();
  r.results["jacobi_defect"] = hs.algebra().jacobi_defect();
}

int cmd_check(const Settings& s, const AlgebraDocument& doc, Report& r) {
  HomogeneousSpace hs = to_space(doc);
  describe_space(r, hs);
  r.add({"input.valid", anchors::kInput, hs.algebra().jacobi_defect(),
         doc.tolerance("jacobi", kJacobiTolerance), true});
  r.add(base_checks(hs, identity_tol(s, doc)));
  r.warnings = hs.warnings();
  return 0;
}

int cmd_curvature(const Settings& s, const AlgebraDocument& doc, Report& r) {
  HomogeneousSpace hs = to_space(doc);
  describe_space(r, hs);
  Matrix ric = ricci(hs);
  r.results["ricci"] = matrix_json(ric);
  r.results["ricci_eigenvalues"] = vector_json(sorted_eigenvalues(ricci_on(hs)));
  r.results["scalar_curvature"] = ric.trace();
  r.results["mean_curvature"] = vector_json(mean_curvature(hs));
  r.results["moment_term"] = matrix_json(moment_term(hs));
  r.results["killing_form"] = matrix_json(killing_form(hs.algebra()));
  r.add(base_checks(hs, identity_tol(s, doc)));
  r.warnings = hs.warnings();
  return 0;
}

nlohmann::ordered_json fit_json(const SolitonFit& f) {
  nlohmann::ordered_json j;
  j["c"] = f.c;
  j["c_unique"] = f.c_unique;
  j["c_fixed"] = f.c_fixed;
  j["D"] = matrix_json(f.D);
  j["D_p"] = matrix_json(f.D_p);
  j["residual"] = f.residual;
  j["optimality_residual"] = f.optimality_residual;
  j["derivation_count"] = f.derivation_count;
  j["normality_residual"] = f.normality_residual;
  j["symmetric_refinement_residual"] = f.symmetric_refinement_residual;
  return j;
}

int cmd_soliton(const Settings& s, const AlgebraDocument& doc, Report& r) {
  HomogeneousSpace hs = to_space(doc);
  describe_space(r, hs);
  SolitonFit fit = soliton_fit(hs);
  r.results["soliton_fit"] = fit_json(fit);
  r.add(at_most("soliton.residual", anchors::kSoliton, fit.residual, identity_tol(s, doc)));
  r.warnings = hs.warnings();
  return 0;
}

nlohmann::ordered_json label_json(const StratumLabel& l) {
  nlohmann::ordered_json j;
  j["abelian"] = l.abelian;
  if (!l.abelian) {
    j["beta"] = matrix_json(l.beta);
    j["spectrum"] = vector_json(l.spectrum);
  }
  j["input_basis"] = l.input_basis;
  j["flow_iterations"] = l.flow_iterations;
  j["final_gradient_norm"] = l.final_gradient_norm;
  return j;
}

int cmd_stratify(const Settings& s, const AlgebraDocument& doc, Report& r) {
  HomogeneousSpace hs = ensure_splitting(to_space(doc), declared_nilradical(doc));
  describe_space(r, hs);
  r.results["dim_h"] = hs.h_dim();
  r.results["dim_n"] = hs.n_dim();
  const double tol = identity_tol(s, doc);
  const double ftol = flow_tol(s, doc);
  StructureTensor mu_n = nil_bracket_on(hs);
  FlowOptions fo = flow_options(s, doc);
  BetaEstimate est = beta_estimate(mu_n, fo);
  r.add(at_most("flow.final_gradient_norm", anchors::kStratum, est.final_gradient_norm, fo.tol));
  r.results["flow_iterations"] = est.iterations;
  r.results["flow_accepted_steps"] = est.accepted_steps;
  if (!est.label) {
    r.warnings.push_back("stratum flow did not converge");
    return 0;
  }
  const StratumLabel& label = *est.label;
  r.results["label"] = label_json(label);
  DerivationBasis ders = derivations_of(label.bracket);
  GitOptions go;
  go.tol = ftol;
  go.seed = s.seed;
  r.add(git_check(label.bracket, label, ders.basis, go));

  if (label.input_basis) {
    PieDiagnostics pie = pie_check(hs, label);
    r.results["ebeta_trace"] = pie.value;
    r.results["ebeta_moment_trace"] = pie.moment_value;
    r.results["lambda1_norm"] = pie.lambda1_norm;
    r.results["ebeta_is_derivation"] = pie.ebeta_is_derivation;
    r.add(at_least_zero("ebeta.trace_inequality", anchors::kEbetaInequality, pie.value, tol));
  } else {
    r.warnings.push_back("beta is known only up to conjugation; the E_beta trace is not evaluated");
  }
  try {
    double worst = 0.0;
    for (int i = 0; i < hs.h_dim(); ++i)
      worst = std::max(worst, std::abs(jablonski_check(hs, Vector(hs.frame().col(i)))));
    r.add(at_most("reductive.trace_identity", anchors::kReductiveTrace, worst, tol));
  } catch (const InvariantError& e) {
    r.warnings.push_back(std::string("reductive trace identity skipped: ") + e.what());
  }
  r.warnings.insert(r.warnings.end(), hs.warnings().begin(), hs.warnings().end());
  return 0;
}

int cmd_extend(const Settings& s, const AlgebraDocument& doc, Report& r) {
  HomogeneousSpace base = to_space(doc);
  const Matrix& D = require_derivation(doc);
  double alpha = 0.0;
  if (s.alpha) {
    alpha = *s.alpha;
  } else if (doc.alpha) {
    alpha = *doc.alpha;
  } else if ((s.lambda || doc.lambda) && (s.m || doc.fiber_dim)) {
    alpha = hpw_alpha(base.induced(D), require_lambda(s, doc), require_m(s, doc));
  } else {
    throw InputError("alpha is required (--alpha, document key 'alpha', or lambda and m)");
  }
  HomogeneousSpace ext = extend(base, D, alpha);
  const double tol = identity_tol(s, doc);
  r.results["alpha"] = alpha;
  AlgebraDocument out;
  out.name = doc.name + "+xi";
  out.dim = ext.algebra().dim();
  out.brackets = ext.algebra().entries();
  if (base.isotropy().dim() > 0) {
    std::vector<int> iso;
    for (int i = 0; i < doc.dim; ++i)
      if (doc.isotropy && std::count(doc.isotropy->begin(), doc.isotropy->end(), i)) iso.push_back(i + 1);
    out.isotropy = iso;
  }
  if (doc.metric) out.metric = ext.metric();
  r.results["document"] = serialize_document(out);
  r.results["ricci"] = matrix_json(ricci(ext));
  r.results["mean_curvature"] = vector_json(mean_curvature(ext));
  r.add(at_most("extension.mean_curvature", anchors::kExtension,
                ext.metric_norm(Vector(mean_curvature(ext) - mean_curvature_extended(base, D, alpha))), tol));
  r.add(base_checks(ext, tol));
  if (s.lambda || doc.lambda) {
    double lambda = require_lambda(s, doc);
    r.results["warping_at_unit_distance"] = warping(lambda, alpha, 1.0);
    r.add(at_most("warping.log_linear", anchors::kWarping,
                  std::abs(std::log(warping(lambda, alpha, 2.0)) - 2.0 * lambda * alpha), tol));
  }
  return 0;
}

int cmd_verify_lnm(const Settings& s, const AlgebraDocument& doc, Report& r) {
  HomogeneousSpace base = to_space(doc);
  const double lambda = require_lambda(s, doc);
  const int m = require_m(s, doc);
  LnmReport lnm = lnm_verify(base, require_derivation(doc), lambda, m);
  const double tol = identity_tol(s, doc);
  r.results["lambda"] = lambda;
  r.results["m"] = m;
  r.results["alpha"] = lnm.alpha;
  r.results["cond1_residual"] = lnm.cond1_residual;
  r.results["cond2_residual"] = lnm.cond2_residual;
  r.results["cond3_residual"] = lnm.cond3_residual;
  r.results["ineqF_value"] = lnm.ineqF_value;
  r.results["DH_norm"] = lnm.DH_norm;
  r.results["extension_ricci"] = matrix_json(lnm.extension_ricci);
  r.results["predicted_ricci"] = matrix_json(lnm.predicted_ricci);
  r.add(lnm.checks(tol));
  std::optional<double> given = s.alpha;
  if (!given && !s.lambda && !s.m) given = doc.alpha;
  if (given)
    r.add(at_most("lnm.alpha_matches", anchors::kLnm, std::abs(*given - lnm.alpha), tol));
  return 0;
}

void audit_one(const Settings& s, const AlgebraDocument& doc, Report& r, const std::string& prefix) {
  HomogeneousSpace base = to_space(doc);
  const double lambda = require_lambda(s, doc);
  const int m = require_m(s, doc);
  AuditOptions opts;
  opts.precondition_tol = identity_tol(s, doc);
  opts.tol = std::max(identity_tol(s, doc), std::min(1e-8, flow_tol(s, doc)));
  opts.flow = flow_options(s, doc);
  opts.declared_nilradical = declared_nilradical(doc);
  auto rename = [&](Check c) {
    c.name = prefix + c.name;
    return c;
  };
  nlohmann::ordered_json j;
  try {
    AuditReport a = theorem_audit(base, require_derivation(doc), lambda, m, opts);
    for (const Check& c : a.lnm.checks(opts.precondition_tol)) r.add(rename(c));
    for (const Check& c : a.checks) r.add(rename(c));
    j["soliton_fit"] = fit_json(a.fit);
    j["soliton_fit_at_lambda"] = fit_json(a.fit_at_lambda);
    j["label"] = label_json(a.label);
    j["alpha"] = a.lnm.alpha;
    j["refused"] = false;
    for (const auto& w : a.warnings) r.warnings.push_back(prefix + w);
  } catch (const AuditRefused& e) {
    LnmReport lnm = lnm_verify(base, require_derivation(doc), lambda, m);
    for (const Check& c : lnm.checks(opts.precondition_tol)) r.add(rename(c));
    j["refused"] = true;
    r.warnings.push_back(prefix + e.what());
  }
  j["lambda"] = lambda;
  j["m"] = m;
  if (prefix.empty()) {
    for (auto& [k, v] : j.items()) r.results[k] = v;
  } else {
    r.results[doc.name] = j;
  }
}

int cmd_audit(const Settings& s, const AlgebraDocument* doc, Report& r) {
  if (!s.all_corpus) {
    audit_one(s, *doc, r, "");
    return 0;
  }
  std::string combined;
  for (const std::string& name : corpus::standard_instances()) {
    AlgebraDocument d = corpus::lookup(name);
    if (!d.derivation || !d.lambda || !d.fiber_dim) continue;
    combined += serialize_document(d);
    audit_one(s, d, r, d.name + ":");
  }
  r.input = "corpus:*";
  r.digest = text_digest(combined);
  return 0;
}

int cmd_corpus(const Settings& s, Report& r) {
  if (s.input.empty()) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& e : corpus::registry()) list.push_back(e.summary);
    r.results["entries"] = list;
    return 0;
  }
  std::string name = s.input.rfind("corpus:", 0) == 0 ? s.input.substr(7) : s.input;
  AlgebraDocument doc = corpus::lookup(name);
  r.input = "corpus:" + name;
  r.digest = document_digest(doc);
  r.results["document"] = serialize_document(doc);
  HomogeneousSpace hs = to_space(doc);
  r.add({"input.valid", anchors::kInput, hs.algebra().jacobi_defect(), kJacobiTolerance, true});
  return 0;
}

std::string fmt(double v) { return detail::format_number(v); }

}  // namespace

int main(int argc, char** argv) {
  Settings s;
  if (const char* env = std::getenv("HOMSPACE_TOLERANCE")) {
    try {
      s.tol_identity = detail::to_number(env, 0, "HOMSPACE_TOLERANCE");
      if (!(s.tol_identity > 0.0)) throw std::invalid_argument("non-positive");
    } catch (const std::exception&) {
      std::cerr << "error: HOMSPACE_TOLERANCE must be a positive number\n";
      return 2;
    }
  }

  CLI::App app{"Homogeneous Ricci soliton and (lambda, n+m)-Einstein verification"};
  app.add_option("command", s.command, "check | curvature | soliton | stratify | extend | verify-lnm | audit | corpus")
      ->required()
      ->check(CLI::IsMember({"check", "curvature", "soliton", "stratify", "extend", "verify-lnm", "audit", "corpus"}));
  app.add_option("input", s.input, "document file, '-' for stdin, or corpus:<name>");
  auto* ti = app.add_option("--tol-identity", s.tol_identity, "tolerance for exact identities")
                 ->check(CLI::PositiveNumber);
  auto* tf = app.add_option("--tol-flow", s.tol_flow, "tolerance for flow-derived quantities")
                 ->check(CLI::PositiveNumber);
  app.add_option("--step", s.step, "initial flow step")->check(CLI::PositiveNumber);
  app.add_option("--max-iter", s.max_iter, "flow iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--seed", s.seed, "seed for randomized probes");
  app.add_option("--output", s.output, "text | machine")->check(CLI::IsMember({"text", "machine"}));
  app.add_option("--lambda", s.lambda, "Einstein constant lambda < 0");
  app.add_option("--m", s.m, "fiber dimension m >= 2");
  app.add_option("--alpha", s.alpha, "extension scale alpha");
  app.add_flag("--all-corpus", s.all_corpus, "audit every corpus entry that carries lnm data");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  s.tol_identity_given = ti->count() > 0;
  s.tol_flow_given = tf->count() > 0;

  Report r;
  r.command = s.command;
  r.input = s.input;
  r.flags = {{"tol_identity", fmt(s.tol_identity)}, {"tol_flow", fmt(s.tol_flow)},
             {"step", fmt(s.step)},                 {"max_iter", std::to_string(s.max_iter)},
             {"seed", std::to_string(s.seed)}};
  if (s.lambda) r.flags.emplace_back("lambda", fmt(*s.lambda));
  if (s.m) r.flags.emplace_back("m", std::to_string(*s.m));
  if (s.alpha) r.flags.emplace_back("alpha", fmt(*s.alpha));
  if (s.all_corpus) r.flags.emplace_back("all_corpus", "true");

  try {
    if (s.command == "corpus") {
      cmd_corpus(s, r);
    } else if (s.command == "audit" && s.all_corpus) {
      if (!s.input.empty()) throw InputError("--all-corpus takes no input");
      cmd_audit(s, nullptr, r);
    } else {
      AlgebraDocument doc = load(s.input);
      r.digest = document_digest(doc);
      if (s.command == "check") cmd_check(s, doc, r);
      else if (s.command == "curvature") cmd_curvature(s, doc, r);
      else if (s.command == "soliton") cmd_soliton(s, doc, r);
      else if (s.command == "stratify") cmd_stratify(s, doc, r);
      else if (s.command == "extend") cmd_extend(s, doc, r);
      else if (s.command == "verify-lnm") cmd_verify_lnm(s, doc, r);
      else if (s.command == "audit") cmd_audit(s, &doc, r);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    std::cerr << "consistency failure: " << e.what() << "\n";
    return 1;
  } catch (const InvariantError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  std::cout << (s.output == "machine" ? r.machine() : r.text());
  return r.verdict() ? 0 : 1;
}
