#include "opmean/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "opmean/errors.hpp"

namespace opmean {

namespace {
std::string fmt_double(double v) {
  if (!std::isfinite(v)) throw DomainError("json dump: non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void dump_rec(const Json& j, std::ostringstream& os, int indent, int depth) {
  const std::string pad = indent >= 0 ? "\n" + std::string(indent * (depth + 1), ' ') : "";
  const std::string padc = indent >= 0 ? "\n" + std::string(indent * depth, ' ') : "";
  switch (j.type()) {
    case Json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ',';
        first = false;
        os << pad << Json(it.key()).dump() << (indent >= 0 ? ": " : ":");
        dump_rec(it.value(), os, indent, depth + 1);
      }
      if (!first) os << padc;
      os << '}';
      break;
    }
    case Json::value_t::array: {
      os << '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ',';
        first = false;
        os << pad;
        dump_rec(v, os, indent, depth + 1);
      }
      if (!first) os << padc;
      os << ']';
      break;
    }
    case Json::value_t::number_float:
      os << fmt_double(j.get<double>());
      break;
    default:
      os << j.dump();
  }
}
}  // namespace

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  dump_rec(j, os, indent, 0);
  return os.str();
}

Json matrix_to_json(const Matrix& m) {
  Json j;
  j["n"] = m.n();
  j["data"] = m.data();
  return j;
}

MatrixRead matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("data"))
    throw DomainError("matrix json: need {\"n\": int, \"data\": [..]}");
  const int n = j.at("n").get<int>();
  if (n <= 0) throw DomainError("matrix json: dimension must be positive");
  std::vector<double> data = j.at("data").get<std::vector<double>>();
  if (data.size() != static_cast<size_t>(n) * n)
    throw DomainError("matrix json: data length does not match n*n");
  Matrix raw(n, std::move(data));
  return MatrixRead{sym_part(raw), asym_defect(raw)};
}

Json extended_to_json(const ExtendedPositive& q) {
  Json j;
  j["n"] = q.n();
  j["einf"] = matrix_to_json(q.einf().matrix());
  j["h"] = matrix_to_json(q.finite_part().matrix());
  return j;
}

ExtendedPositive extended_from_json(const Json& j) {
  const Projection einf(matrix_from_json(j.at("einf")).m);
  const PsdMatrix h(matrix_from_json(j.at("h")).m);
  return ExtendedPositive(einf, h);
}

Json repfun_to_json(const RepresentingFunction& f) {
  Json j;
  if (f.is_power_mean()) {
    j["named"] = "power_mean";
    j["alpha"] = f.power_alpha();
    return j;
  }
  j["alpha"] = f.alpha();
  j["beta"] = f.beta();
  Json atoms = Json::array();
  for (const auto& [t, w] : f.atom_list()) atoms.push_back(Json::array({t, w}));
  j["atoms"] = atoms;
  return j;
}

RepresentingFunction repfun_from_json(const Json& j) {
  if (j.contains("named")) {
    const std::string name = j.at("named").get<std::string>();
    const double al = j.contains("alpha") ? j.at("alpha").get<double>() : 0.5;
    return RepresentingFunction::from_name(name, al);
  }
  std::vector<RepresentingFunction::Atom> atoms;
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms"))
      atoms.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
  return RepresentingFunction::atoms(j.value("alpha", 0.0), j.value("beta", 0.0),
                                     std::move(atoms));
}

Json algebra_to_json(const TraceAlgebra& alg) {
  Json blocks = Json::array();
  for (const auto& [n, w] : alg.blocks) blocks.push_back(Json::array({n, w}));
  return Json{{"blocks", blocks}};
}

TraceAlgebra algebra_from_json(const Json& j) {
  TraceAlgebra alg;
  for (const auto& b : j.at("blocks"))
    alg.blocks.emplace_back(b.at(0).get<int>(), b.at(1).get<double>());
  alg.validate();
  return alg;
}

Json block_element_to_json(const BlockElement& x) {
  Json blocks = Json::array();
  for (const Matrix& m : x) blocks.push_back(matrix_to_json(m));
  return Json{{"blocks", blocks}};
}

BlockElement block_element_from_json(const Json& j) {
  BlockElement x;
  for (const auto& b : j.at("blocks")) x.push_back(matrix_from_json(b).m);
  return x;
}

Json lp_to_json(const LpPositive& h) {
  Json j;
  j["p"] = h.p;
  j["H"] = matrix_to_json(h.H.matrix());
  return j;
}

LpPositive lp_from_json(const Json& j) {
  return LpPositive{PsdMatrix(matrix_from_json(j.at("H")).m), j.at("p").get<double>()};
}

Json snumbers_to_json(const SNumberFunction& mu) {
  Json j;
  j["breakpoints"] = mu.cuts();
  j["values"] = mu.values();
  j["total_weight"] = mu.total_weight();
  return j;
}

Json connection_result_to_json(const ConnectionResult& r) {
  Json j;
  j["value"] = matrix_to_json(r.value.matrix());
  j["route"] = r.route == ConnectionResult::Route::Spectral ? "spectral" : "quadrature";
  j["nodes"] = r.nodes;
  j["notes"] = r.notes;
  return j;
}

Json lebesgue_to_json(const LebesgueResult& r) {
  Json j;
  j["p_tilde"] = matrix_to_json(r.p_tilde.matrix());
  j["H_ac"] = matrix_to_json(r.H_ac);
  j["H_sing"] = matrix_to_json(r.H_sing);
  j["oracle_H_ac"] = matrix_to_json(r.oracle_H_ac);
  j["oracle_gap"] = r.oracle_gap;
  j["iterations"] = r.iterations;
  return j;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open file: " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw DomainError("json parse error in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot open file for writing: " + path);
  out << dump_json(j, 1) << "\n";
}

}  // namespace opmean

namespace opmean {

namespace {
// human-readable property references for the campaign checks
std::string check_ref(const std::string& id) {
  static const std::map<std::string, std::string> refs = {
      {"forms.split-domination", "parallel sum maximality under splits"},
      {"forms.split-attained", "variational minimizer attains the parallel sum"},
      {"forms.inverse-order-reversing", "inversion reverses the form order"},
      {"forms.inverse-involution", "double inversion is the identity"},
      {"forms.transpose", "transpose swaps the arguments"},
      {"forms.matrix-route-agreement", "form and matrix connections coincide"},
      {"forms.adjoint-inequality", "adjoint connection below the inverted route"},
      {"forms.adjoint-equality-bounded-below", "adjoint equality for bounded-below forms"},
      {"forms.power-mean-homogeneity", "two-sided scaling homogeneity of power means"},
      {"forms.inf-exchange", "infimum exchanges with parallel sums"},
      {"connections.dual-route-power-mean", "spectral and integral routes agree"},
      {"connections.dual-route-atoms", "atomic measures make the integral route exact"},
      {"connections.h-independence", "factorization base does not matter"},
      {"connections.monotonicity", "joint monotonicity"},
      {"connections.concavity", "joint concavity"},
      {"connections.transpose", "transpose swaps the arguments"},
      {"connections.ordering-transfer", "pointwise function order transfers"},
      {"connections.sandwich-lower", "twice the parallel sum below symmetric means"},
      {"connections.sandwich-upper", "symmetric means below the arithmetic mean"},
      {"connections.adjoint-identity", "adjoint through inverses on invertible pairs"},
      {"connections.decreasing-convergence", "regularized means decrease to the singular value"},
      {"connections.decreasing-gap", "regularized means converge"},
      {"connections.transformer-inequality", "two-sided compressions never increase means"},
      {"connections.transformer-equality", "compression equality under support containment"},
      {"connections.block-geo-membership", "geometric mean solves the block PSD problem"},
      {"connections.block-psum-membership", "parallel sum solves the split block problem"},
      {"connections.block-geo-bump-rejected", "nothing above the geometric mean is feasible"},
      {"traces.lp-route-agreement", "trace powers equal rearrangement integrals"},
      {"traces.snumber-inf-definition", "s-numbers match their tail-projection definition"},
      {"traces.snumber-tail-bound", "s-numbers obey the p-norm tail bound"},
      {"traces.submajorization-sum", "s-numbers of sums split at half weight"},
      {"traces.submajorization-product", "s-numbers of products split at half weight"},
      {"traces.k-functional-routes", "truncation oracle equals the rearrangement integral"},
      {"traces.pairing-closed-form", "closed-form minimizer of the pairing"},
      {"traces.pairing-split-domination", "random splits dominate the pairing"},
      {"traces.weight-level-agreement", "trace of a connection equals its atom expansion"},
      {"traces.decreasing-convergence", "decreasing sequences reach factorized limits in norm"},
      {"traces.log-det-product-r>=1", "running determinant of powered products, r >= 1"},
      {"traces.log-det-product-r<=1", "running determinant of powered products, r <= 1"},
      {"traces.log-det-mean-vs-product", "running determinant of means below products"},
      {"traces.log-det-power-chain", "running determinant chain across powers"},
      {"traces.holder-mean-norm", "norm chain through the two-exponent split"},
      {"lebesgue.cocycle-identity", "contractions resolve the support identity"},
      {"lebesgue.graph-idempotent", "graph projection is idempotent"},
      {"lebesgue.graph-symmetric", "graph projection is symmetric"},
      {"lebesgue.oracle-equivalence", "projection route equals the parallel-sum supremum"},
      {"lebesgue.oracle-equivalence-second-exponent",
       "projection route equals the supremum at another exponent"},
      {"lebesgue.exact-complement", "the two parts sum back to the input"},
      {"lebesgue.ac-below-H", "the regular part stays below the input"},
      {"lebesgue.ac-positive", "the regular part is positive"},
      {"lebesgue.invertible-K-trivial", "invertible references absorb everything"},
      {"lebesgue.ac-maximality", "dominated minorants stay below the regular part"},
      {"lebesgue.singular-part", "the singular part has no common minorant"},
  };
  auto it = refs.find(id);
  return it == refs.end() ? std::string("unlisted property") : it->second;
}
}  // namespace

Json report_to_json(const CampaignReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["trials"] = r.trials;
  j["verdict"] = r.pass() ? "pass" : "fail";
  Json checks = Json::array();
  for (const auto& [id, slack] : r.worst_slack)
    checks.push_back(Json{{"id", id}, {"ref", check_ref(id)}, {"worst_slack", slack}});
  j["checks"] = checks;
  Json fails = Json::array();
  for (const auto& f : r.failures)
    fails.push_back(Json{{"check", f.check},
                         {"trial", f.trial},
                         {"slack", f.slack},
                         {"instance", Json::parse(f.payload_json)}});
  j["failures"] = fails;
  j["findings"] = r.findings;
  j["wall_ms"] = r.wall_ms;
  return j;
}

}  // namespace opmean
