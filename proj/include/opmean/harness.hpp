#ifndef OPMEAN_HARNESS_HPP
#define OPMEAN_HARNESS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opmean/matrix.hpp"
#include "opmean/rng.hpp"
#include "opmean/spectra.hpp"

namespace opmean {

// Instance generation policy for randomized campaigns.
struct GenSpec {
  uint64_t seed = 1;
  int dim_min = 2;
  int dim_max = 8;
  enum class RankPolicy { Full, UniformRandom, Fixed } rank_policy = RankPolicy::UniformRandom;
  int fixed_rank = 1;
  double cond_cap = 100.0;
  int count = 200;
};

Matrix gen_gaussian(Rng& rng, int n);
// orthonormal columns from QR of a gaussian matrix, deterministic sign fix
Matrix gen_orthogonal(Rng& rng, int n);
// Q^T diag(lam) Q with log-uniform spectrum in [1/cond, 1] on `rank` entries
PsdMatrix gen_psd(Rng& rng, int n, int rank, double cond);
PsdMatrix gen_psd(Rng& rng, int n, const GenSpec& spec);
int draw_dim(Rng& rng, const GenSpec& spec);
int draw_rank(Rng& rng, int n, const GenSpec& spec);

struct CheckFailure {
  std::string check;
  int trial = 0;
  double slack = 0.0;
  std::string payload_json;  // instance data, re-runnable
};

struct CampaignReport {
  std::string suite;
  int trials = 0;
  std::vector<CheckFailure> failures;
  // worst signed defect per check; negative means margin was consumed
  std::map<std::string, double> worst_slack;
  // informational findings (conjecture probe); never cause failure
  std::vector<std::string> findings;
  double wall_ms = 0.0;
  bool pass() const { return failures.empty(); }
};

struct Tolerances {
  double tol = -1.0;  // <= 0: per-check defaults
  int nodes = 2000;
  bool strict = false;
};

// Registered suites: forms, connections-core, connections-inequalities,
// traces-snumbers, traces-lambda, lebesgue-oracle, conjecture-probe.
// `injected_json` optionally bypasses the generator with explicit instances
// (array of instance objects; schema depends on the suite).
CampaignReport run_suite(const std::string& name, const GenSpec& spec,
                         const Tolerances& tol,
                         const std::string* injected_json = nullptr);

std::vector<std::string> suite_names();

}  // namespace opmean

#endif
