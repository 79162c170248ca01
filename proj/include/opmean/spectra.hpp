#ifndef OPMEAN_SPECTRA_HPP
#define OPMEAN_SPECTRA_HPP

#include <functional>
#include <vector>

#include "opmean/matrix.hpp"

namespace opmean {

// Global numerical-rank threshold knob. Every support decision in the library
// goes through rank_tol_rel(): eigenvalues <= rank_tol_rel(n) * lam_max count
// as zero. Default is n * 1e-12; set_rank_tol_override replaces the whole
// relative factor.
double rank_tol_override();
void set_rank_tol_override(double v);
double rank_tol_rel(int n);

// Eigendecomposition of a symmetric matrix: A = V diag(values) V^T,
// values ascending, V orthonormal columns.
struct EigSym {
  std::vector<double> values;
  Matrix vectors;
};

// Cyclic Jacobi sweeps; deterministic for fixed input. Throws ConvergenceError
// if the off-diagonal norm has not dropped below 1e-14 * ||A||_F after 100
// sweeps.
EigSym eig_sym(const Matrix& a);

class Projection;

// Symmetric positive semidefinite matrix with its eigendecomposition cached at
// construction. Raw eigenvalues in [-tol, 0) are clipped to zero; anything
// below -tol is rejected. Immutable.
class PsdMatrix {
 public:
  explicit PsdMatrix(const Matrix& a);
  // Keeps exactly the largest `forced_rank` eigenvalues and zeroes the rest.
  // Used where the rank of a sum is known from the summands' supports, so the
  // decision does not depend on the relative scale of the summands.
  PsdMatrix(const Matrix& a, int forced_rank);

  // Trusted spectral constructor: no re-decomposition. `vectors` must be
  // orthonormal; negative values are clipped to zero.
  static PsdMatrix from_spectrum(Matrix vectors, std::vector<double> values);
  // Lenient constructor for computed results: clips every negative eigenvalue
  // instead of rejecting ones below -tol.
  static PsdMatrix clipped(const Matrix& a);

  int n() const { return mat_.n(); }
  int rank() const { return rank_; }
  const Matrix& matrix() const { return mat_; }
  const std::vector<double>& eigenvalues() const { return values_; }
  const Matrix& eigenvectors() const { return vectors_; }
  double lam_max() const;
  // absolute threshold below which an eigenvalue counts as zero
  double zero_threshold() const { return thr_; }

  PsdMatrix scaled(double t) const;  // t >= 0
  // pseudo-power on the numerical support: eigenvalues <= threshold map to 0
  PsdMatrix power(double r) const;
  Matrix sqrt_m() const;
  Matrix pinv_sqrt() const;
  Projection support() const;

  // true when the eigenvalue at index i counts toward the numerical support
  bool in_support(int i) const { return support_mask_[i] != 0; }

 private:
  PsdMatrix() = default;
  void finish(int forced_rank, bool reject_negative);
  Matrix mat_;
  std::vector<double> values_;  // ascending, clipped
  Matrix vectors_;
  std::vector<char> support_mask_;
  int rank_ = 0;
  double thr_ = 0.0;
};

// Orthogonal projection; construction checks ||P^2-P||_F <= 1e-10 and
// symmetry.
class Projection {
 public:
  explicit Projection(const Matrix& p);
  static Projection zero(int n);
  static Projection full(int n);
  // sum of v v^T over the given orthonormal columns
  static Projection from_columns(const Matrix& v, const std::vector<int>& cols);

  int n() const { return mat_.n(); }
  int rank() const { return rank_; }
  const Matrix& matrix() const { return mat_; }
  Projection complement() const;

 private:
  Matrix mat_;
  int rank_;
};

// V g(diag) V^T. Throws DomainError naming the eigenvalue if g is non-finite
// there.
Matrix fun_calc(const PsdMatrix& a, const std::function<double(double)>& g);

// T with a = b^{1/2} T b^{1/2}, supported in s(b); requires range(a) inside
// range(b), checked via the off-support residual of a.
PsdMatrix factor_T(const PsdMatrix& a, const PsdMatrix& b);

struct Polar {
  Matrix u;     // partial isometry, u^T u = support(m)
  PsdMatrix m;  // (a^T a)^{1/2}
};
Polar polar(const Matrix& a);

double min_eig(const Matrix& sym);
// smallest eigenvalue of b - a
double psd_order_gap(const PsdMatrix& a, const PsdMatrix& b);

}  // namespace opmean

#endif
