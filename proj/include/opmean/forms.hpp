#ifndef OPMEAN_FORMS_HPP
#define OPMEAN_FORMS_HPP

#include <vector>

#include "opmean/matrix.hpp"
#include "opmean/repfun.hpp"
#include "opmean/spectra.hpp"

namespace opmean {

// Positive form with a possibly non-dense domain: an "infinity subspace"
// projection plus a PSD finite part on its complement. Internally one
// orthonormal frame with a value per column in [0, +inf]; +inf marks the
// infinity subspace. Inversion flips values in place (0 <-> +inf, lam ->
// 1/lam), so the subspace structure is involutive exactly.
class ExtendedPositive {
 public:
  // frame columns orthonormal, values nonnegative or +inf
  ExtendedPositive(Matrix frame, std::vector<double> values);
  ExtendedPositive(const Projection& einf, const PsdMatrix& finite);
  static ExtendedPositive from_matrix(const Matrix& h);
  static ExtendedPositive zero(int n);
  // +inf off the origin
  static ExtendedPositive infinite(int n);

  int n() const { return frame_.n(); }
  const Matrix& frame() const { return frame_; }
  const std::vector<double>& frame_values() const { return values_; }
  bool has_infinity() const;

  Projection einf() const;
  PsdMatrix finite_part() const;

  // +inf when xi meets the infinity subspace (relative gate sqrt(rank_tol)),
  // else xi^T h xi; eval(0) = 0.
  double eval(const Vector& xi) const;

  ExtendedPositive inverse() const;
  // t > 0; t == 0 gives the zero form
  ExtendedPositive scaled(double t) const;

 private:
  Matrix frame_;
  std::vector<double> values_;
  double finite_threshold() const;
};

ExtendedPositive form_sum(const ExtendedPositive& q1, const ExtendedPositive& q2);
ExtendedPositive parallel_sum_form(const ExtendedPositive& q1, const ExtendedPositive& q2);

// Limit of a decreasing sequence, detected through stabilization of the
// penalized resolvents (1 + h + einf/rank_tol)^{-1}. Throws OrderError when
// the sampled decreasingness check fails, ConvergenceError when the sequence
// never stabilizes.
ExtendedPositive inf_decreasing(const std::vector<ExtendedPositive>& seq,
                                double stagnation_tol = 1e-10, bool strict = false);

// alpha q1 + beta q2 + sum_i w_i (1+t_i)/t_i ((t_i q1) : q2)
ExtendedPositive connect_form(const RepresentingFunction& f, const ExtendedPositive& q1,
                              const ExtendedPositive& q2, int nodes = 2000);

}  // namespace opmean

#endif
