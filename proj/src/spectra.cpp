#include "opmean/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "opmean/errors.hpp"

namespace opmean {

namespace {
double g_rank_tol_override = -1.0;

double off_diag_norm(const Matrix& w) {
  const int n = w.n();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += 2.0 * w(i, j) * w(i, j);
  return std::sqrt(s);
}
}  // namespace

double rank_tol_override() { return g_rank_tol_override; }
void set_rank_tol_override(double v) { g_rank_tol_override = v; }

double rank_tol_rel(int n) {
  if (g_rank_tol_override > 0.0) return g_rank_tol_override;
  return n * 1e-12;
}

EigSym eig_sym(const Matrix& a) {
  const int n = a.n();
  Matrix w = sym_part(a);
  Matrix v = Matrix::identity(n);
  const double norm = frob_norm(w);
  const double tol = 1e-14 * norm;

  if (n > 1 && norm > 0.0) {
    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
      if (off_diag_norm(w) <= tol) break;
      for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
          const double apq = w(p, q);
          if (apq == 0.0) continue;
          const double diff = w(q, q) - w(p, p);
          double t;
          if (std::abs(apq) < 1e-300 * std::abs(diff)) {
            t = apq / diff;
          } else {
            const double theta = 0.5 * diff / apq;
            t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
            if (theta < 0.0) t = -t;
          }
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          const double h = t * apq;
          w(p, p) -= h;
          w(q, q) += h;
          w(p, q) = 0.0;
          w(q, p) = 0.0;
          for (int k = 0; k < n; ++k) {
            if (k == p || k == q) continue;
            const double wkp = w(k, p);
            const double wkq = w(k, q);
            w(k, p) = c * wkp - s * wkq;
            w(p, k) = w(k, p);
            w(k, q) = s * wkp + c * wkq;
            w(q, k) = w(k, q);
          }
          for (int k = 0; k < n; ++k) {
            const double vkp = v(k, p);
            const double vkq = v(k, q);
            v(k, p) = c * vkp - s * vkq;
            v(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
    if (off_diag_norm(w) > tol) {
      std::ostringstream os;
      os << "eig_sym: no convergence after " << max_sweeps
         << " sweeps, off-diagonal residual " << off_diag_norm(w) / std::max(norm, 1e-300);
      throw ConvergenceError(os.str(), off_diag_norm(w));
    }
  }

  EigSym e;
  e.values.resize(n);
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = w(i, i);
  std::stable_sort(idx.begin(), idx.end(), [&](int i, int j) { return d[i] < d[j]; });
  e.vectors = Matrix(n);
  for (int j = 0; j < n; ++j) {
    e.values[j] = d[idx[j]];
    // sign convention: largest-magnitude component positive
    int imax = 0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      const double av = std::abs(v(i, idx[j]));
      if (av > best) {
        best = av;
        imax = i;
      }
    }
    const double sgn = v(imax, idx[j]) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) e.vectors(i, j) = sgn * v(i, idx[j]);
  }
  return e;
}

void PsdMatrix::finish(int forced_rank, bool reject_negative) {
  const int n = mat_.n();
  EigSym e = eig_sym(mat_);
  values_ = std::move(e.values);
  vectors_ = std::move(e.vectors);
  const double lmax = values_.empty() ? 0.0 : std::max(values_.back(), 0.0);
  thr_ = rank_tol_rel(n) * lmax;
  support_mask_.assign(n, 0);

  if (forced_rank >= 0) {
    // keep exactly the top forced_rank eigenvalues (they are sorted ascending)
    const int cut = n - forced_rank;
    for (int i = 0; i < n; ++i) {
      if (i < cut || values_[i] < 0.0)
        values_[i] = 0.0;
      else
        support_mask_[i] = 1;
    }
    rank_ = forced_rank;
  } else {
    for (int i = 0; i < n; ++i) {
      if (values_[i] < 0.0) {
        if (reject_negative && values_[i] < -thr_) {
          std::ostringstream os;
          os << "PsdMatrix: eigenvalue " << values_[i] << " below -tolerance " << -thr_;
          throw DomainError(os.str());
        }
        values_[i] = 0.0;
      }
    }
    rank_ = 0;
    for (int i = 0; i < n; ++i) {
      if (values_[i] > thr_) {
        support_mask_[i] = 1;
        ++rank_;
      }
    }
  }

  // rebuild the matrix from the (clipped) spectrum so matrix() and the cache
  // agree exactly
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        if (values_[k] == 0.0) continue;
        s += values_[k] * vectors_(i, k) * vectors_(j, k);
      }
      m(i, j) = s;
      m(j, i) = s;
    }
  mat_ = std::move(m);
}

PsdMatrix::PsdMatrix(const Matrix& a) {
  mat_ = sym_part(a);
  finish(-1, true);
}

PsdMatrix::PsdMatrix(const Matrix& a, int forced_rank) {
  if (forced_rank < 0 || forced_rank > a.n())
    throw ConfigError("PsdMatrix: forced rank out of range");
  mat_ = sym_part(a);
  finish(forced_rank, false);
}

PsdMatrix PsdMatrix::from_spectrum(Matrix vectors, std::vector<double> values) {
  PsdMatrix p;
  const int n = vectors.n();
  p.vectors_ = std::move(vectors);
  p.values_ = std::move(values);
  double lmax = 0.0;
  for (double& lam : p.values_) {
    if (lam < 0.0) lam = 0.0;
    lmax = std::max(lmax, lam);
  }
  p.thr_ = rank_tol_rel(n) * lmax;
  p.rank_ = 0;
  p.support_mask_.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    if (p.values_[i] > p.thr_) {
      p.support_mask_[i] = 1;
      ++p.rank_;
    }
  }
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        if (p.values_[k] == 0.0) continue;
        s += p.values_[k] * p.vectors_(i, k) * p.vectors_(j, k);
      }
      m(i, j) = s;
      m(j, i) = s;
    }
  p.mat_ = std::move(m);
  return p;
}

double PsdMatrix::lam_max() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, v);
  return m;
}

PsdMatrix PsdMatrix::scaled(double t) const {
  if (t < 0.0) throw DomainError("PsdMatrix::scaled: negative factor");
  std::vector<double> vals = values_;
  for (double& v : vals) v *= t;
  return from_spectrum(vectors_, std::move(vals));
}

PsdMatrix PsdMatrix::power(double r) const {
  std::vector<double> vals(values_.size());
  for (size_t i = 0; i < values_.size(); ++i)
    vals[i] = support_mask_[i] ? std::pow(values_[i], r) : 0.0;
  return from_spectrum(vectors_, std::move(vals));
}

Matrix PsdMatrix::sqrt_m() const { return power(0.5).matrix(); }

Matrix PsdMatrix::pinv_sqrt() const { return power(-0.5).matrix(); }

Projection PsdMatrix::support() const {
  std::vector<int> cols;
  for (int i = 0; i < n(); ++i)
    if (support_mask_[i]) cols.push_back(i);
  return Projection::from_columns(vectors_, cols);
}

PsdMatrix PsdMatrix::clipped(const Matrix& a) {
  PsdMatrix p;
  p.mat_ = sym_part(a);
  p.finish(-1, false);
  return p;
}

Projection::Projection(const Matrix& p) : mat_(sym_part(p)) {
  const Matrix diff = mat_ * mat_ - mat_;
  if (frob_norm(diff) > 1e-10)
    throw DomainError("Projection: matrix is not idempotent");
  rank_ = static_cast<int>(std::lround(trace(mat_)));
}

Projection Projection::zero(int n) { return Projection(Matrix(n)); }
Projection Projection::full(int n) { return Projection(Matrix::identity(n)); }

Projection Projection::from_columns(const Matrix& v, const std::vector<int>& cols) {
  const int n = v.n();
  Matrix p(n);
  for (int c : cols)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p(i, j) += v(i, c) * v(j, c);
  return Projection(p);
}

Projection Projection::complement() const {
  return Projection(Matrix::identity(n()) - mat_);
}

Matrix fun_calc(const PsdMatrix& a, const std::function<double(double)>& g) {
  const int n = a.n();
  std::vector<double> gv(n);
  for (int i = 0; i < n; ++i) {
    gv[i] = g(a.eigenvalues()[i]);
    if (!std::isfinite(gv[i])) {
      std::ostringstream os;
      os << "fun_calc: g is not finite at eigenvalue " << a.eigenvalues()[i];
      throw DomainError(os.str());
    }
  }
  const Matrix& v = a.eigenvectors();
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        if (gv[k] == 0.0) continue;
        s += gv[k] * v(i, k) * v(j, k);
      }
      m(i, j) = s;
      m(j, i) = s;
    }
  return m;
}

PsdMatrix factor_T(const PsdMatrix& a, const PsdMatrix& b) {
  if (a.n() != b.n()) throw DomainError("factor_T: dimension mismatch");
  const int n = a.n();
  const Matrix sb = b.support().matrix();
  const Matrix off = Matrix::identity(n) - sb;
  const Matrix resid = off * a.matrix() * off;
  const double tol = 1e-9 * std::max(1.0, frob_norm(a.matrix()));
  if (frob_norm(resid) > tol) {
    std::ostringstream os;
    os << "factor_T: range(a) not contained in range(b), off-support residual "
       << frob_norm(resid);
    throw DomainError(os.str());
  }
  const Matrix bis = b.pinv_sqrt();
  // whitened product; roundoff negatives from the 1/sqrt amplification are
  // clipped rather than rejected
  return PsdMatrix::clipped(bis * a.matrix() * bis);
}

Polar polar(const Matrix& a) {
  PsdMatrix m(transpose(a) * a);
  PsdMatrix root = m.power(0.5);
  const Matrix u = a * m.power(-0.5).matrix();
  return Polar{u, root};
}

double min_eig(const Matrix& sym) {
  return eig_sym(sym).values.front();
}

double psd_order_gap(const PsdMatrix& a, const PsdMatrix& b) {
  if (a.n() != b.n()) throw DomainError("psd_order_gap: dimension mismatch");
  return min_eig(b.matrix() - a.matrix());
}

}  // namespace opmean
