#ifndef OPMEAN_REPFUN_HPP
#define OPMEAN_REPFUN_HPP

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace opmean {

// Operator monotone function on (0,inf) in integral form
//   f(s) = alpha + beta s + sum_i w_i (1+t_i) s / (s + t_i),
// either as explicit finite atom data, as a named closed form, or as a
// pointwise-evaluable closure (results of adjoint()). The perspective
// g(l) = l f((1-l)/l) with g(0) = beta, g(1) = alpha drives the spectral
// route of connections.
class RepresentingFunction {
 public:
  using Atom = std::pair<double, double>;  // (t, w), both > 0

  enum class Name { Arithmetic, Harmonic, ParallelSum, Geometric, PowerMean };

  static RepresentingFunction atoms(double alpha, double beta, std::vector<Atom> atoms);
  static RepresentingFunction named(Name name, double alpha_param = 0.5);
  // accepted: arithmetic | harmonic | parallel_sum | geometric | power_mean
  static RepresentingFunction from_name(const std::string& name, double alpha_param = 0.5);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double eval(double s) const;
  double g(double lambda) const;
  // f(1) == 1 within 1e-12
  bool is_mean() const;
  // true when the measure is a finite atomic list (quadrature route is exact)
  bool has_atoms() const;
  const std::vector<Atom>& atom_list() const { return atoms_; }
  bool is_power_mean() const;
  double power_alpha() const { return power_alpha_; }

  // Atoms realizing the measure for the integral route. Exact for atom-form
  // and atomizable named functions; a quadrature discretization (>= `nodes`
  // parallel-sum evaluations) for the power means. Throws ConfigError for
  // closures.
  std::vector<Atom> atomize(int nodes) const;

  // Power-mean measures split at t = 1 into two halves relating through the
  // transpose; each half is returned as atoms with t in (0, 1]. The first
  // half applies to (a, b) as given, the second to the swapped pair, which
  // keeps the scaled argument the small one at every node.
  std::vector<Atom> lower_half_atoms(int nodes) const;
  std::vector<Atom> upper_half_atoms(int nodes) const;

  RepresentingFunction transpose() const;
  // f*(t) = f(1/t)^{-1}; DomainError when f vanishes on (0,inf)
  RepresentingFunction adjoint() const;

  std::string describe() const;

 private:
  RepresentingFunction() = default;

  enum class Kind { Atoms, Named, Closure } kind_ = Kind::Atoms;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  std::vector<Atom> atoms_;
  Name name_ = Name::Arithmetic;
  double power_alpha_ = 0.5;
  std::function<double(double)> closure_;
  std::string label_;
};

}  // namespace opmean

#endif
