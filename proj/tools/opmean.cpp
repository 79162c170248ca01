// Command-line front end over the JSON interfaces: means and parallel sums of
// PSD matrices, s-number calculus on weighted block algebras, Lebesgue-type
// decomposition, and the randomized verification campaigns.

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "opmean/errors.hpp"
#include "opmean/harness.hpp"
#include "opmean/json_io.hpp"

using namespace opmean;

namespace {

PsdMatrix load_psd(const std::string& path) {
  const MatrixRead r = matrix_from_json(load_json_file(path));
  if (r.asym_defect > 0.0)
    std::cerr << path << ": symmetrized away an asymmetry defect of " << r.asym_defect << "\n";
  return PsdMatrix(r.m);
}

RepresentingFunction parse_function(const std::string& spec) {
  // named function, optionally with a weight ("power_mean:0.25"), else a path
  // to a representing-function JSON file
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  for (const char* known : {"arithmetic", "harmonic", "parallel_sum", "geometric", "power_mean"}) {
    if (head == known) {
      double al = 0.5;
      if (colon != std::string::npos) al = std::stod(spec.substr(colon + 1));
      return RepresentingFunction::from_name(head, al);
    }
  }
  return repfun_from_json(load_json_file(spec));
}

void emit(const Json& j, const std::string& out_path) {
  const std::string s = dump_json(j, 1);
  std::cout << s << "\n";
  if (!out_path.empty()) write_json_file(out_path, j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator means, parallel sums and Lebesgue decomposition for PSD matrices"};
  app.require_subcommand(1);

  std::string out_path;
  double rank_tol = -1.0;
  double tol = -1.0;
  int nodes = 2000;
  uint64_t seed = 1;
  app.add_option("--out", out_path, "also write the JSON result to this file");
  app.add_option("--rank-tol", rank_tol, "relative numerical-rank threshold (default n*1e-12)");
  app.add_option("--tol", tol, "campaign tolerance override");
  app.add_option("--nodes", nodes, "quadrature node budget for integral routes");
  app.add_option("--seed", seed, "campaign seed");

  // mean
  auto* mean = app.add_subcommand("mean", "connection of two PSD matrices");
  mean->fallthrough();
  std::string mean_f = "geometric", mean_route = "spectral";
  std::vector<std::string> mean_files;
  mean->add_option("--f", mean_f, "representing function (name[:weight] or JSON file)");
  mean->add_option("--route", mean_route, "spectral | quadrature")
      ->check(CLI::IsMember({"spectral", "quadrature"}));
  mean->add_option("inputs", mean_files, "A.json B.json")->expected(2);

  // psum
  auto* ps = app.add_subcommand("psum", "parallel sum of two PSD matrices");
  ps->fallthrough();
  std::vector<std::string> ps_files;
  ps->add_option("inputs", ps_files, "A.json B.json")->expected(2);

  // snumbers
  auto* sn = app.add_subcommand("snumbers", "generalized s-numbers of a block element");
  sn->fallthrough();
  std::string sn_alg, sn_x;
  sn->add_option("--algebra", sn_alg, "trace algebra JSON")->required();
  sn->add_option("input", sn_x, "X.json")->required();

  // det
  auto* det = app.add_subcommand("det", "running determinant of a block element");
  det->fallthrough();
  std::string det_alg, det_x;
  double det_t = 1.0;
  det->add_option("--algebra", det_alg, "trace algebra JSON")->required();
  det->add_option("--t", det_t, "upper limit of the running integral")->required();
  det->add_option("input", det_x, "X.json")->required();

  // kfun
  auto* kf = app.add_subcommand("kfun", "interpolation functional, both routes");
  kf->fallthrough();
  std::string kf_alg, kf_x;
  double kf_t = 1.0;
  kf->add_option("--algebra", kf_alg, "trace algebra JSON")->required();
  kf->add_option("--t", kf_t, "interpolation parameter")->required();
  kf->add_option("input", kf_x, "A.json (PSD block element)")->required();

  // decompose
  auto* dec = app.add_subcommand("decompose", "regular/singular splitting against a reference");
  dec->fallthrough();
  double dec_p = 2.0;
  std::vector<std::string> dec_files;
  dec->add_option("--p", dec_p, "cone exponent (>= 1)");
  dec->add_option("inputs", dec_files, "H.json K.json")->expected(2);

  // fuzz
  auto* fz = app.add_subcommand("fuzz", "randomized verification campaign");
  fz->fallthrough();
  std::string fz_suite;
  int fz_trials = 200;
  std::vector<int> fz_dims;
  double fz_cond = 100.0;
  std::string fz_inject;
  fz->add_option("--suite", fz_suite, "suite name")->required();
  fz->add_option("--trials", fz_trials, "trial count");
  fz->add_option("--dims", fz_dims, "dimension range (min max)")->expected(2);
  fz->add_option("--cond", fz_cond, "condition-number cap of generated spectra");
  fz->add_option("--inject", fz_inject, "JSON file with explicit instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (rank_tol > 0.0) set_rank_tol_override(rank_tol);

    if (*mean) {
      const PsdMatrix a = load_psd(mean_files[0]);
      const PsdMatrix b = load_psd(mean_files[1]);
      const RepresentingFunction f = parse_function(mean_f);
      const ConnectionResult r = mean_route == "spectral"
                                     ? connect_spectral(f, a, b)
                                     : connect_quadrature(f, a, b, nodes);
      emit(connection_result_to_json(r), out_path);
    } else if (*ps) {
      const PsdMatrix a = load_psd(ps_files[0]);
      const PsdMatrix b = load_psd(ps_files[1]);
      emit(matrix_to_json(psum(a, b).matrix()), out_path);
    } else if (*sn) {
      const TraceAlgebra alg = algebra_from_json(load_json_file(sn_alg));
      const BlockElement x = block_element_from_json(load_json_file(sn_x));
      emit(snumbers_to_json(s_numbers(alg, x)), out_path);
    } else if (*det) {
      const TraceAlgebra alg = algebra_from_json(load_json_file(det_alg));
      const BlockElement x = block_element_from_json(load_json_file(det_x));
      Json j;
      j["t"] = det_t;
      j["det"] = fk_det(alg, x, det_t);
      emit(j, out_path);
    } else if (*kf) {
      const TraceAlgebra alg = algebra_from_json(load_json_file(kf_alg));
      const BlockElement a = block_element_from_json(load_json_file(kf_x));
      const KFunctional r = k_functional(alg, a, kf_t);
      Json j;
      j["t"] = kf_t;
      j["integral_route"] = r.integral_route;
      j["oracle_route"] = r.oracle_route;
      j["argmin_r"] = r.argmin_r;
      emit(j, out_path);
    } else if (*dec) {
      const LpPositive h{load_psd(dec_files[0]), dec_p};
      const LpPositive k{load_psd(dec_files[1]), dec_p};
      emit(lebesgue_to_json(decompose(h, k)), out_path);
    } else if (*fz) {
      GenSpec spec;
      spec.seed = seed;
      spec.count = fz_trials;
      if (!fz_dims.empty()) {
        spec.dim_min = fz_dims[0];
        spec.dim_max = fz_dims[1];
      }
      spec.cond_cap = fz_cond;
      Tolerances t;
      t.tol = tol;
      t.nodes = nodes;
      CampaignReport rep;
      if (!fz_inject.empty()) {
        const std::string injected = dump_json(load_json_file(fz_inject));
        rep = run_suite(fz_suite, spec, t, &injected);
      } else {
        rep = run_suite(fz_suite, spec, t);
      }
      emit(report_to_json(rep), out_path);
      return rep.pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
