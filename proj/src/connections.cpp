#include "opmean/connections.hpp"

#include <cmath>

#include "opmean/errors.hpp"

namespace opmean {

namespace {
// eigenvalues of T_{a/h} clamped to [0,1], values within rank_tol of the
// endpoints snapped onto them: Holder-rough perspectives (the power means)
// otherwise amplify noise-level eigenvalues into lambda^alpha-size junk
std::vector<double> clamped_t_values(const PsdMatrix& t) {
  const double snap = rank_tol_rel(t.n());
  std::vector<double> lam = t.eigenvalues();
  for (double& l : lam) {
    if (l < snap) l = 0.0;
    if (l > 1.0 - snap) l = 1.0;
    l = std::min(std::max(l, 0.0), 1.0);
  }
  return lam;
}

// Numerical-rank clipping of h = a + b can drop directions where a is not
// exactly zero (extreme scale ratios). Every connection vanishes outside the
// support of a + b, so the consistent move is to compress a onto the kept
// support instead of rejecting the factorization.
PsdMatrix compress_onto(const PsdMatrix& a, const PsdMatrix& h) {
  const Matrix s = h.support().matrix();
  return PsdMatrix::clipped(s * a.matrix() * s);
}
}  // namespace

ConnectionResult connect_spectral(const RepresentingFunction& f, const PsdMatrix& a,
                                  const PsdMatrix& b) {
  if (a.n() != b.n()) throw DomainError("connect_spectral: dimension mismatch");
  PsdMatrix h = PsdMatrix::clipped(a.matrix() + b.matrix());
  PsdMatrix t = factor_T(compress_onto(a, h), h);
  std::vector<double> lam = clamped_t_values(t);
  std::vector<double> gv(lam.size());
  for (size_t i = 0; i < lam.size(); ++i) gv[i] = f.g(lam[i]);
  const PsdMatrix gt = PsdMatrix::from_spectrum(t.eigenvectors(), std::move(gv));
  const Matrix hr = h.sqrt_m();
  ConnectionResult r{PsdMatrix::clipped(hr * gt.matrix() * hr), ConnectionResult::Route::Spectral,
                     0, "one-variable reduction, T eigenvalues snapped to {0,1} within rank_tol"};
  return r;
}

namespace {
// shared parallel-sum kernel; the caller decides whether the raw matrix needs
// to be re-wrapped
Matrix psum_raw(const PsdMatrix& a, const PsdMatrix& b) {
  if (a.rank() == 0 || b.rank() == 0) return Matrix(a.n());
  PsdMatrix h = PsdMatrix::clipped(a.matrix() + b.matrix());
  PsdMatrix t = factor_T(compress_onto(a, h), h);
  // upper-end snap only: eigenvalues at 1 mean b vanishes along the
  // direction, where the parallel sum is exactly zero; the lower end instead
  // carries the genuinely tiny shares the supremum constructions climb on
  const double snap = rank_tol_rel(t.n());
  std::vector<double> lam = t.eigenvalues();
  std::vector<double> gv(lam.size());
  for (size_t i = 0; i < lam.size(); ++i) {
    double l = std::min(std::max(lam[i], 0.0), 1.0);
    if (l > 1.0 - snap) l = 1.0;
    gv[i] = l - l * l;
  }
  const PsdMatrix gt = PsdMatrix::from_spectrum(t.eigenvectors(), std::move(gv));
  const Matrix hr = h.sqrt_m();
  return hr * gt.matrix() * hr;
}
}  // namespace

PsdMatrix psum(const PsdMatrix& a, const PsdMatrix& b) {
  if (a.n() != b.n()) throw DomainError("psum: dimension mismatch");
  return PsdMatrix::clipped(psum_raw(a, b));
}

ConnectionResult connect_quadrature(const RepresentingFunction& f, const PsdMatrix& a,
                                    const PsdMatrix& b, int nodes) {
  if (a.n() != b.n()) throw DomainError("connect_quadrature: dimension mismatch");
  if (nodes < 8) throw ConfigError("connect_quadrature: need at least 8 nodes");
  Matrix acc(a.n());
  if (f.alpha() > 0.0) acc += f.alpha() * a.matrix();
  if (f.beta() > 0.0) acc += f.beta() * b.matrix();
  int used = 0;
  std::string notes;
  if (f.has_atoms()) {
    for (const auto& [t, w] : f.atomize(nodes)) {
      Matrix term = psum_raw(a.scaled(t), b);
      term *= w * (1.0 + t) / t;
      acc += term;
      ++used;
    }
    notes = "exact atomic measure";
  } else {
    // power mean: both halves of the measure evaluated with the scaled
    // argument as the small one, which keeps the whitening of t x + y away
    // from its graded floating-point floor
    const int n1 = nodes / 2;
    for (const auto& [t, w] : f.lower_half_atoms(n1)) {
      Matrix term = psum_raw(a.scaled(t), b);
      term *= w * (1.0 + t) / t;
      acc += term;
      ++used;
    }
    for (const auto& [t, w] : f.upper_half_atoms(nodes - n1)) {
      Matrix term = psum_raw(b.scaled(t), a);
      term *= w * (1.0 + t) / t;
      acc += term;
      ++used;
    }
    notes = "head mass at the centroid, log-space tail nodes, small-argument orientation";
  }
  return ConnectionResult{PsdMatrix::clipped(acc), ConnectionResult::Route::Quadrature, used,
                          std::move(notes)};
}

PsdMatrix geomean_weighted(const PsdMatrix& a, const PsdMatrix& b, double alpha) {
  if (a.n() != b.n()) throw DomainError("geomean_weighted: dimension mismatch");
  if (alpha < 0.0 || alpha > 1.0) throw DomainError("geomean_weighted: alpha outside [0,1]");
  if (alpha == 0.0) return a;
  if (alpha == 1.0) return b;
  if (a.rank() == a.n()) {
    const Matrix ar = a.sqrt_m();
    const Matrix ai = a.power(-0.5).matrix();
    const PsdMatrix mid = PsdMatrix::clipped(ai * b.matrix() * ai);
    return PsdMatrix::clipped(ar * mid.power(alpha).matrix() * ar);
  }
  return connect_spectral(RepresentingFunction::named(RepresentingFunction::Name::PowerMean, alpha),
                          a, b)
      .value;
}

TransformerGap transformer_gap(const RepresentingFunction& f, const PsdMatrix& a,
                               const PsdMatrix& b, const Matrix& c) {
  if (a.n() != b.n() || a.n() != c.n()) throw DomainError("transformer_gap: dimension mismatch");
  const Matrix ct = transpose(c);
  const PsdMatrix asb = connect_spectral(f, a, b).value;
  const Matrix lhs = sym_part(ct * asb.matrix() * c);
  const PsdMatrix ca = PsdMatrix::clipped(ct * a.matrix() * c);
  const PsdMatrix cb = PsdMatrix::clipped(ct * b.matrix() * c);
  const PsdMatrix rhs = connect_spectral(f, ca, cb).value;
  const double gap = min_eig(rhs.matrix() - lhs);

  const PsdMatrix sum = PsdMatrix::clipped(a.matrix() + b.matrix());
  const PsdMatrix cct = PsdMatrix::clipped(c * ct);
  const double containment =
      min_eig(cct.support().matrix() - sum.support().matrix());
  const bool expected = containment >= -1e-8;
  const double scale = std::max(1.0, frob_norm(rhs.matrix()));
  const bool holds = frob_norm(rhs.matrix() - lhs) <= 1e-8 * scale;
  return TransformerGap{lhs, rhs.matrix(), gap, expected, holds};
}

BlockCheck block_max_checks(const PsdMatrix& a, const PsdMatrix& b, const PsdMatrix& c,
                            BlockKind which) {
  if (a.n() != b.n() || a.n() != c.n()) throw DomainError("block_max_checks: dimension mismatch");
  Matrix m(2 * a.n());
  if (which == BlockKind::Geo) {
    m = block2x2(a.matrix(), c.matrix(), c.matrix(), b.matrix());
  } else {
    const Matrix neg = -1.0 * c.matrix();
    m = block2x2(a.matrix() - c.matrix(), neg, neg, b.matrix() - c.matrix());
  }
  const double w = min_eig(m);
  const double scale = std::max(1.0, frob_norm(m));
  return BlockCheck{w >= -1e-10 * scale, w};
}

}  // namespace opmean
