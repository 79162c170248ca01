#ifndef OPMEAN_TRACES_HPP
#define OPMEAN_TRACES_HPP

#include <utility>
#include <vector>

#include "opmean/matrix.hpp"
#include "opmean/repfun.hpp"
#include "opmean/spectra.hpp"

namespace opmean {

// Weighted block-diagonal algebra with trace tau(x) = sum_k w_k Tr(x_k).
// Strictly positive, non-uniform weights keep the s-number step structure
// nontrivial.
struct TraceAlgebra {
  std::vector<std::pair<int, double>> blocks;  // (dim, weight)

  void validate() const;
  int total_dim() const;
  double tau_identity() const;
};

// Element of the algebra: one square matrix per block.
using BlockElement = std::vector<Matrix>;

void check_shape(const TraceAlgebra& alg, const BlockElement& x);
double tau(const TraceAlgebra& alg, const BlockElement& x);
// tau(x y)
double tau_pair(const TraceAlgebra& alg, const BlockElement& x, const BlockElement& y);

BlockElement block_add(const BlockElement& x, const BlockElement& y);
BlockElement block_sub(const BlockElement& x, const BlockElement& y);
BlockElement block_scale(double s, const BlockElement& x);
BlockElement block_mul(const BlockElement& x, const BlockElement& y);
BlockElement block_transpose(const BlockElement& x);
BlockElement block_identity(const TraceAlgebra& alg);
// per-block pseudo-power of a PSD element
BlockElement block_power(const BlockElement& x, double r);
// per-block parallel sum of PSD elements
BlockElement block_psum(const BlockElement& a, const BlockElement& b);
// per-block spectral-route connection of PSD elements
BlockElement block_connect(const RepresentingFunction& f, const BlockElement& a,
                           const BlockElement& b);

// Decreasing step function mu_t: values vals_[i] on [cuts_[i-1], cuts_[i]),
// zero from cuts_.back() on. All integrals are exact piecewise sums.
class SNumberFunction {
 public:
  SNumberFunction(std::vector<double> cuts, std::vector<double> vals);

  const std::vector<double>& cuts() const { return cuts_; }
  const std::vector<double>& values() const { return vals_; }
  double total_weight() const { return cuts_.empty() ? 0.0 : cuts_.back(); }
  double at(double t) const;
  // int_0^t mu_s ds
  double integral(double t) const;
  // int_0^t log mu_s ds; -inf when mu vanishes on a positive-measure part
  double log_integral(double t) const;
  // int_0^inf mu_s^p ds
  double p_integral(double p) const;

 private:
  std::vector<double> cuts_;
  std::vector<double> vals_;
};

// Generalized s-numbers of |x| with respect to tau.
SNumberFunction s_numbers(const TraceAlgebra& alg, const BlockElement& x);
// tau of the spectral projection e_(s,inf)(|x|); the inf-definition oracle
double tau_tail_projection(const TraceAlgebra& alg, const BlockElement& x, double s);

struct LpRoutes {
  double spectral;  // tau(|x|^p)^(1/p)
  double step;      // (int mu^p)^(1/p)
};
// p in (0, inf]; p = inf returns the largest s-number on both routes
LpRoutes lp_norm(const TraceAlgebra& alg, const BlockElement& x, double p);

// running determinant exp int_0^t log mu_s; 0 when the support weight is
// exhausted before t
double fk_det(const TraceAlgebra& alg, const BlockElement& x, double t);

struct KFunctional {
  double integral_route;  // int_0^t mu_s(a) ds
  double oracle_route;    // min_r ||(a-r)_+||_1 + t r
  double argmin_r;
};
KFunctional k_functional(const TraceAlgebra& alg, const BlockElement& a, double t);

struct PairingResult {
  double lhs;         // tau((a:b) x^T x)
  double best_split;  // value at the closed-form minimizer
  BlockElement y, z;  // the minimizing split y + z = x
};
PairingResult pairing_variational(const TraceAlgebra& alg, const BlockElement& a,
                                  const BlockElement& b, const BlockElement& x);

struct ConvergenceReport {
  BlockElement limit;
  std::vector<double> p_norm_gaps;  // ||a_n - limit||_p per step
  bool monotone;
  double final_gap;
};
// Limit of a decreasing PSD sequence through the strong limit of the
// factorizations against h = a_1; reports the ||.||_p decay.
ConvergenceReport convergence_check(const TraceAlgebra& alg,
                                    const std::vector<BlockElement>& seq, double p);

}  // namespace opmean

#endif
