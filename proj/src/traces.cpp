#include "opmean/traces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "opmean/connections.hpp"
#include "opmean/errors.hpp"

namespace opmean {

void TraceAlgebra::validate() const {
  if (blocks.empty()) throw DomainError("TraceAlgebra: at least one block required");
  for (const auto& [n, w] : blocks) {
    if (n <= 0) throw DomainError("TraceAlgebra: block dimension must be positive");
    if (!(w > 0.0)) throw DomainError("TraceAlgebra: block weight must be positive");
  }
}

int TraceAlgebra::total_dim() const {
  int s = 0;
  for (const auto& [n, w] : blocks) s += n;
  return s;
}

double TraceAlgebra::tau_identity() const {
  double s = 0.0;
  for (const auto& [n, w] : blocks) s += w * n;
  return s;
}

void check_shape(const TraceAlgebra& alg, const BlockElement& x) {
  if (x.size() != alg.blocks.size())
    throw DomainError("BlockElement: block count does not match the algebra");
  for (size_t k = 0; k < x.size(); ++k)
    if (x[k].n() != alg.blocks[k].first)
      throw DomainError("BlockElement: block dimension mismatch");
}

double tau(const TraceAlgebra& alg, const BlockElement& x) {
  check_shape(alg, x);
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += alg.blocks[k].second * trace(x[k]);
  return s;
}

double tau_pair(const TraceAlgebra& alg, const BlockElement& x, const BlockElement& y) {
  check_shape(alg, x);
  check_shape(alg, y);
  double s = 0.0;
  for (size_t k = 0; k < x.size(); ++k) s += alg.blocks[k].second * trace(x[k] * y[k]);
  return s;
}

BlockElement block_add(const BlockElement& x, const BlockElement& y) {
  BlockElement r = x;
  for (size_t k = 0; k < r.size(); ++k) r[k] += y[k];
  return r;
}

BlockElement block_sub(const BlockElement& x, const BlockElement& y) {
  BlockElement r = x;
  for (size_t k = 0; k < r.size(); ++k) r[k] -= y[k];
  return r;
}

BlockElement block_scale(double s, const BlockElement& x) {
  BlockElement r = x;
  for (Matrix& m : r) m *= s;
  return r;
}

BlockElement block_mul(const BlockElement& x, const BlockElement& y) {
  BlockElement r;
  r.reserve(x.size());
  for (size_t k = 0; k < x.size(); ++k) r.push_back(x[k] * y[k]);
  return r;
}

BlockElement block_transpose(const BlockElement& x) {
  BlockElement r;
  r.reserve(x.size());
  for (const Matrix& m : x) r.push_back(transpose(m));
  return r;
}

BlockElement block_identity(const TraceAlgebra& alg) {
  BlockElement r;
  r.reserve(alg.blocks.size());
  for (const auto& [n, w] : alg.blocks) r.push_back(Matrix::identity(n));
  return r;
}

BlockElement block_power(const BlockElement& x, double r) {
  BlockElement out;
  out.reserve(x.size());
  for (const Matrix& m : x) out.push_back(PsdMatrix::clipped(m).power(r).matrix());
  return out;
}

BlockElement block_psum(const BlockElement& a, const BlockElement& b) {
  BlockElement out;
  out.reserve(a.size());
  for (size_t k = 0; k < a.size(); ++k)
    out.push_back(psum(PsdMatrix::clipped(a[k]), PsdMatrix::clipped(b[k])).matrix());
  return out;
}

BlockElement block_connect(const RepresentingFunction& f, const BlockElement& a,
                           const BlockElement& b) {
  BlockElement out;
  out.reserve(a.size());
  for (size_t k = 0; k < a.size(); ++k)
    out.push_back(
        connect_spectral(f, PsdMatrix::clipped(a[k]), PsdMatrix::clipped(b[k])).value.matrix());
  return out;
}

SNumberFunction::SNumberFunction(std::vector<double> cuts, std::vector<double> vals)
    : cuts_(std::move(cuts)), vals_(std::move(vals)) {
  if (cuts_.size() != vals_.size())
    throw DomainError("SNumberFunction: cuts and values must pair up");
  double prev_cut = 0.0;
  double prev_val = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < cuts_.size(); ++i) {
    if (!(cuts_[i] > prev_cut)) throw DomainError("SNumberFunction: cuts must increase");
    if (vals_[i] > prev_val || !(vals_[i] > 0.0))
      throw DomainError("SNumberFunction: values must be positive and nonincreasing");
    prev_cut = cuts_[i];
    prev_val = vals_[i];
  }
}

double SNumberFunction::at(double t) const {
  if (t < 0.0) throw DomainError("SNumberFunction::at: t must be nonnegative");
  for (size_t i = 0; i < cuts_.size(); ++i)
    if (t < cuts_[i]) return vals_[i];
  return 0.0;
}

double SNumberFunction::integral(double t) const {
  double s = 0.0;
  double left = 0.0;
  for (size_t i = 0; i < cuts_.size() && left < t; ++i) {
    const double right = std::min(cuts_[i], t);
    s += vals_[i] * (right - left);
    left = cuts_[i];
  }
  return s;
}

double SNumberFunction::log_integral(double t) const {
  // positive-measure gate: accumulation order can move the last cut by an ulp
  if (t > total_weight() * (1.0 + 1e-12) + 1e-300)
    return -std::numeric_limits<double>::infinity();
  double s = 0.0;
  double left = 0.0;
  for (size_t i = 0; i < cuts_.size() && left < t; ++i) {
    const double right = std::min(cuts_[i], t);
    s += std::log(vals_[i]) * (right - left);
    left = cuts_[i];
  }
  return s;
}

double SNumberFunction::p_integral(double p) const {
  double s = 0.0;
  double left = 0.0;
  for (size_t i = 0; i < cuts_.size(); ++i) {
    s += std::pow(vals_[i], p) * (cuts_[i] - left);
    left = cuts_[i];
  }
  return s;
}

namespace {
// Singular values of one block through the symmetric embedding
// [[0, x^T], [x, 0]], whose spectrum is {+s_i, -s_i}. Unlike the Gram matrix
// x^T x this keeps the noise floor linear in ||x||, so rank decisions on
// products of clipped factors stay consistent.
std::vector<double> singular_values(const Matrix& x) {
  const int n = x.n();
  Matrix emb(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      emb(i, j + n) = x(j, i);
      emb(i + n, j) = x(i, j);
    }
  const EigSym e = eig_sym(emb);  // ascending
  std::vector<double> sv(n);
  for (int i = 0; i < n; ++i) sv[i] = std::max(e.values[2 * n - 1 - i], 0.0);
  return sv;
}

// (singular value, weight) pairs of |x|, descending, zeros dropped
std::vector<std::pair<double, double>> sv_weight_pairs(const TraceAlgebra& alg,
                                                       const BlockElement& x) {
  check_shape(alg, x);
  std::vector<std::pair<double, double>> pairs;
  double vmax = 0.0;
  for (size_t k = 0; k < x.size(); ++k) {
    for (double sv : singular_values(x[k])) {
      vmax = std::max(vmax, sv);
      pairs.emplace_back(sv, alg.blocks[k].second);
    }
  }
  const double tol = rank_tol_rel(alg.total_dim()) * vmax;
  std::erase_if(pairs, [tol](const auto& p) { return p.first <= tol; });
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  return pairs;
}
}  // namespace

SNumberFunction s_numbers(const TraceAlgebra& alg, const BlockElement& x) {
  const auto pairs = sv_weight_pairs(alg, x);
  std::vector<double> cuts, vals;
  double acc = 0.0;
  for (const auto& [v, w] : pairs) {
    acc += w;
    if (!vals.empty() && vals.back() == v)
      cuts.back() = acc;  // merge equal values into one step
    else {
      vals.push_back(v);
      cuts.push_back(acc);
    }
  }
  return SNumberFunction(std::move(cuts), std::move(vals));
}

double tau_tail_projection(const TraceAlgebra& alg, const BlockElement& x, double s) {
  double t = 0.0;
  for (const auto& [v, w] : sv_weight_pairs(alg, x))
    if (v > s) t += w;
  return t;
}

LpRoutes lp_norm(const TraceAlgebra& alg, const BlockElement& x, double p) {
  if (!(p > 0.0)) throw DomainError("lp_norm: p must be positive");
  const SNumberFunction mu = s_numbers(alg, x);
  if (std::isinf(p)) {
    const double top = mu.values().empty() ? 0.0 : mu.values().front();
    return LpRoutes{top, top};
  }
  // spectral route in block order, step route over the rearrangement
  double spect = 0.0;
  for (const auto& [v, w] : sv_weight_pairs(alg, x)) spect += w * std::pow(v, p);
  return LpRoutes{std::pow(spect, 1.0 / p), std::pow(mu.p_integral(p), 1.0 / p)};
}

double fk_det(const TraceAlgebra& alg, const BlockElement& x, double t) {
  if (!(t > 0.0)) throw DomainError("fk_det: t must be positive");
  const SNumberFunction mu = s_numbers(alg, x);
  const double li = mu.log_integral(t);
  return std::isinf(li) ? 0.0 : std::exp(li);
}

KFunctional k_functional(const TraceAlgebra& alg, const BlockElement& a, double t) {
  if (!(t > 0.0)) throw DomainError("k_functional: t must be positive");
  const SNumberFunction mu = s_numbers(alg, a);
  const double integral = mu.integral(t);

  // oracle over the truncation level r: phi(r) = ||(a - r)_+||_1 + t r is
  // convex piecewise linear in r
  const auto pairs = sv_weight_pairs(alg, a);
  auto phi = [&](double r) {
    double s = t * r;
    for (const auto& [v, w] : pairs) s += w * std::max(v - r, 0.0);
    return s;
  };
  double lo = 0.0;
  double hi = pairs.empty() ? 0.0 : pairs.front().first;
  double best_r = 0.0, best = phi(0.0);
  const int grid = 64;
  for (int i = 0; i <= grid; ++i) {
    const double r = lo + (hi - lo) * i / grid;
    const double v = phi(r);
    if (v < best) {
      best = v;
      best_r = r;
    }
  }
  // golden-section refinement around the grid winner
  double gl = std::max(lo, best_r - (hi - lo) / grid);
  double gr = std::min(hi, best_r + (hi - lo) / grid);
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = gr - ratio * (gr - gl), x2 = gl + ratio * (gr - gl);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 200 && gr - gl > 1e-12 * std::max(1.0, hi); ++it) {
    if (f1 <= f2) {
      gr = x2;
      x2 = x1;
      f2 = f1;
      x1 = gr - ratio * (gr - gl);
      f1 = phi(x1);
    } else {
      gl = x1;
      x1 = x2;
      f1 = f2;
      x2 = gl + ratio * (gr - gl);
      f2 = phi(x2);
    }
  }
  const double rstar = 0.5 * (gl + gr);
  if (phi(rstar) < best) {
    best = phi(rstar);
    best_r = rstar;
  }
  return KFunctional{integral, best, best_r};
}

PairingResult pairing_variational(const TraceAlgebra& alg, const BlockElement& a,
                                  const BlockElement& b, const BlockElement& x) {
  check_shape(alg, a);
  check_shape(alg, b);
  check_shape(alg, x);
  const BlockElement ab = block_psum(a, b);
  const BlockElement xtx = block_mul(block_transpose(x), x);
  const double lhs = tau_pair(alg, ab, xtx);

  // minimizer: z h^{1/2} = x a^{1/2} k with k = a^{1/2} h^{+/2}, i.e.
  // z = x a h^{+} on the support of h
  BlockElement y, z;
  for (size_t kb = 0; kb < a.size(); ++kb) {
    const PsdMatrix ak = PsdMatrix::clipped(a[kb]);
    const PsdMatrix bk = PsdMatrix::clipped(b[kb]);
    const PsdMatrix sums(ak.support().matrix() + bk.support().matrix());
    const PsdMatrix h(ak.matrix() + bk.matrix(), sums.rank());
    const Matrix zk = x[kb] * ak.matrix() * h.power(-1.0).matrix();
    z.push_back(zk);
    y.push_back(x[kb] - zk);
  }
  const double val = tau_pair(alg, a, block_mul(block_transpose(y), y)) +
                     tau_pair(alg, b, block_mul(block_transpose(z), z));
  return PairingResult{lhs, val, std::move(y), std::move(z)};
}

ConvergenceReport convergence_check(const TraceAlgebra& alg,
                                    const std::vector<BlockElement>& seq, double p) {
  if (seq.empty()) throw DomainError("convergence_check: empty sequence");
  for (const BlockElement& e : seq) check_shape(alg, e);
  for (size_t i = 0; i + 1 < seq.size(); ++i) {
    for (size_t k = 0; k < seq[i].size(); ++k) {
      const Matrix d = seq[i][k] - seq[i + 1][k];
      const double scale = std::max(1.0, frob_norm(seq[i][k]));
      if (min_eig(sym_part(d)) < -1e-10 * scale)
        throw OrderError("convergence_check: sequence is not decreasing");
    }
  }

  // strong limit of the factorizations against h = a_1
  std::vector<PsdMatrix> h;
  for (const Matrix& m : seq.front()) h.push_back(PsdMatrix::clipped(m));
  std::vector<Matrix> t0;
  for (size_t k = 0; k < h.size(); ++k) t0.push_back(Matrix(h[k].n()));
  for (size_t k = 0; k < h.size(); ++k) {
    Matrix prev = factor_T(PsdMatrix::clipped(seq.front()[k]), h[k]).matrix();
    for (size_t i = 1; i < seq.size(); ++i) {
      Matrix cur = factor_T(PsdMatrix::clipped(seq[i][k]), h[k]).matrix();
      if (frob_norm(cur - prev) < 1e-12) {
        prev = cur;
        break;
      }
      prev = cur;
    }
    t0[k] = prev;
  }
  BlockElement limit;
  for (size_t k = 0; k < h.size(); ++k) {
    const Matrix hr = h[k].sqrt_m();
    limit.push_back(sym_part(hr * t0[k] * hr));
  }

  ConvergenceReport rep;
  rep.limit = limit;
  rep.monotone = true;
  double prev_gap = std::numeric_limits<double>::infinity();
  for (const BlockElement& e : seq) {
    const double gap = lp_norm(alg, block_sub(e, limit), p).step;
    // wiggles at the stagnation floor are below the resolution of the claim
    if (gap > prev_gap * (1.0 + 1e-6) + 1e-11) rep.monotone = false;
    rep.p_norm_gaps.push_back(gap);
    prev_gap = gap;
  }
  rep.final_gap = rep.p_norm_gaps.back();
  return rep;
}

}  // namespace opmean
