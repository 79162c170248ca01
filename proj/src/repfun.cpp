#include "opmean/repfun.hpp"

#include <cmath>
#include <sstream>

#include "opmean/errors.hpp"

namespace opmean {

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
// head cut of the integral route; below it ((ta):b)/t is taken constant
constexpr double kHeadCut = 1e-6;

// Gauss-Legendre nodes/weights on [0,1] via Newton on the Legendre polynomial.
void gauss_legendre01(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    // initial guess (Chebyshev-like), then Newton
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = 0.5 * (1.0 - z);  // map [-1,1] -> [0,1], ascending
    w[i] = 1.0 / ((1.0 - z * z) * pp * pp);
  }
}

// Atoms for c * int_0^1 ((ta):b) t^(expo-2) dt with c = sin(expo*pi)/pi,
// in the standard semantics  sum_i w_i (1+t_i)/t_i ((t_i a):b).
// Head [0, kHeadCut]: exact mass placed on one atom at the weight centroid.
// Tail [kHeadCut, 1]: Gauss-Legendre in log t (integrand analytic there).
void half_atoms(double expo, int nodes, std::vector<RepresentingFunction::Atom>& out) {
  const double c = std::sin(expo * kPi) / kPi;
  const double tc = kHeadCut * expo / (expo + 1.0);
  const double head_mass = c * std::pow(kHeadCut, expo) / expo;
  out.emplace_back(tc, head_mass / (1.0 + tc));

  const double big_l = -std::log(kHeadCut);
  std::vector<double> x, w;
  gauss_legendre01(nodes - 1, x, w);
  for (int i = 0; i < nodes - 1; ++i) {
    const double t = std::exp(std::log(kHeadCut) * (1.0 - x[i]));
    const double cap_w = w[i] * c * big_l * std::pow(t, expo);  // = W * t, W = w c L t^(e-1)
    out.emplace_back(t, cap_w / (1.0 + t));
  }
}
}  // namespace

RepresentingFunction RepresentingFunction::atoms(double alpha, double beta,
                                                 std::vector<Atom> atoms) {
  if (alpha < 0.0 || beta < 0.0)
    throw DomainError("RepresentingFunction: alpha and beta must be nonnegative");
  for (const auto& [t, w] : atoms)
    if (!(t > 0.0) || !(w > 0.0))
      throw DomainError("RepresentingFunction: atoms need t > 0 and w > 0");
  RepresentingFunction f;
  f.kind_ = Kind::Atoms;
  f.alpha_ = alpha;
  f.beta_ = beta;
  f.atoms_ = std::move(atoms);
  return f;
}

RepresentingFunction RepresentingFunction::named(Name name, double alpha_param) {
  RepresentingFunction f;
  f.kind_ = Kind::Named;
  f.name_ = name;
  switch (name) {
    case Name::Arithmetic:
      f.alpha_ = 0.5;
      f.beta_ = 0.5;
      break;
    case Name::Harmonic:
      f.atoms_ = {{1.0, 1.0}};
      break;
    case Name::ParallelSum:
      f.atoms_ = {{1.0, 0.5}};
      break;
    case Name::Geometric:
      alpha_param = 0.5;
      [[fallthrough]];
    case Name::PowerMean:
      if (alpha_param < 0.0 || alpha_param > 1.0)
        throw DomainError("power mean weight must lie in [0,1]");
      f.power_alpha_ = alpha_param;
      if (alpha_param == 0.0) f.alpha_ = 1.0;         // f == 1
      if (alpha_param == 1.0) f.beta_ = 1.0;          // f == s
      break;
  }
  return f;
}

RepresentingFunction RepresentingFunction::from_name(const std::string& name,
                                                     double alpha_param) {
  if (name == "arithmetic") return named(Name::Arithmetic);
  if (name == "harmonic") return named(Name::Harmonic);
  if (name == "parallel_sum") return named(Name::ParallelSum);
  if (name == "geometric") return named(Name::Geometric);
  if (name == "power_mean") return named(Name::PowerMean, alpha_param);
  throw ConfigError("unknown representing function name: " + name);
}

bool RepresentingFunction::is_power_mean() const {
  return kind_ == Kind::Named && (name_ == Name::Geometric || name_ == Name::PowerMean);
}

double RepresentingFunction::eval(double s) const {
  if (!(s > 0.0)) throw DomainError("RepresentingFunction::eval: s must be positive");
  if (is_power_mean()) return std::pow(s, power_alpha_);
  if (kind_ == Kind::Closure) return closure_(s);
  double v = alpha_ + beta_ * s;
  for (const auto& [t, w] : atoms_) v += w * (1.0 + t) * s / (s + t);
  return v;
}

double RepresentingFunction::g(double lambda) const {
  if (lambda <= 0.0) return beta_;
  if (lambda >= 1.0) return alpha_;
  if (is_power_mean())
    return std::pow(lambda, 1.0 - power_alpha_) * std::pow(1.0 - lambda, power_alpha_);
  if (kind_ == Kind::Closure) return lambda * closure_((1.0 - lambda) / lambda);
  // stable form of l*f((1-l)/l)
  double v = alpha_ * lambda + beta_ * (1.0 - lambda);
  for (const auto& [t, w] : atoms_)
    v += w * (1.0 + t) * lambda * (1.0 - lambda) / ((1.0 - lambda) + t * lambda);
  return v;
}

bool RepresentingFunction::is_mean() const { return std::abs(eval(1.0) - 1.0) <= 1e-12; }

bool RepresentingFunction::has_atoms() const {
  return kind_ == Kind::Atoms || (kind_ == Kind::Named && !is_power_mean());
}

std::vector<RepresentingFunction::Atom> RepresentingFunction::atomize(int nodes) const {
  if (nodes < 8) throw ConfigError("atomize: need at least 8 nodes");
  if (has_atoms()) return atoms_;
  if (kind_ == Kind::Closure)
    throw ConfigError("atomize: function is only pointwise evaluable");
  // power mean, 0 < alpha < 1: split the measure at t = 1. The upper half
  // maps onto lower-half atoms of the transposed weight via t -> 1/t with
  // unchanged atom weights.
  const double al = power_alpha_;
  if (al == 0.0 || al == 1.0) return {};
  std::vector<Atom> out;
  out.reserve(nodes);
  const int n1 = nodes / 2;
  half_atoms(al, n1, out);
  std::vector<Atom> upper;
  half_atoms(1.0 - al, nodes - n1, upper);
  for (const auto& [t, w] : upper) out.emplace_back(1.0 / t, w);
  return out;
}

std::vector<RepresentingFunction::Atom> RepresentingFunction::lower_half_atoms(int nodes) const {
  if (!is_power_mean() || power_alpha_ == 0.0 || power_alpha_ == 1.0)
    throw ConfigError("half atoms exist for the interior power means only");
  std::vector<Atom> out;
  half_atoms(power_alpha_, nodes, out);
  return out;
}

std::vector<RepresentingFunction::Atom> RepresentingFunction::upper_half_atoms(int nodes) const {
  if (!is_power_mean() || power_alpha_ == 0.0 || power_alpha_ == 1.0)
    throw ConfigError("half atoms exist for the interior power means only");
  std::vector<Atom> out;
  half_atoms(1.0 - power_alpha_, nodes, out);
  return out;
}

RepresentingFunction RepresentingFunction::transpose() const {
  if (is_power_mean()) return named(Name::PowerMean, 1.0 - power_alpha_);
  if (kind_ == Kind::Closure) {
    RepresentingFunction f;
    f.kind_ = Kind::Closure;
    f.alpha_ = beta_;
    f.beta_ = alpha_;
    auto base = closure_;
    f.closure_ = [base](double t) { return t * base(1.0 / t); };
    f.label_ = "transpose(" + label_ + ")";
    return f;
  }
  // atom data: swap endpoints, atoms t -> 1/t with unchanged weights
  std::vector<Atom> tr;
  tr.reserve(atoms_.size());
  for (const auto& [t, w] : atoms_) tr.emplace_back(1.0 / t, w);
  RepresentingFunction f = atoms(beta_, alpha_, std::move(tr));
  if (kind_ == Kind::Named &&
      (name_ == Name::Arithmetic || name_ == Name::Harmonic || name_ == Name::ParallelSum)) {
    return named(name_);  // these are transpose-invariant
  }
  return f;
}

RepresentingFunction RepresentingFunction::adjoint() const {
  if (is_power_mean()) return named(Name::PowerMean, power_alpha_);
  if (kind_ == Kind::Named && name_ == Name::Arithmetic) return named(Name::Harmonic);
  if (kind_ == Kind::Named && name_ == Name::Harmonic) return named(Name::Arithmetic);
  if (kind_ == Kind::Named && name_ == Name::ParallelSum)
    return atoms(1.0, 1.0, {});  // adjoint of the parallel sum is the sum
  if (kind_ == Kind::Closure)
    throw ConfigError("adjoint: nested closures are not supported");
  if (alpha_ == 0.0 && beta_ == 0.0 && atoms_.empty())
    throw DomainError("adjoint: f vanishes identically on (0,inf)");
  // f*(t) = f(1/t)^{-1}, pointwise; endpoint data from the closed form of f:
  //   alpha* = 1/lim_{s->inf} f(s)   (0 when f is unbounded)
  //   beta*  = 1/f'(0+)              (0 when the slope is infinite)
  RepresentingFunction f;
  f.kind_ = Kind::Closure;
  double f_inf_slope = beta_;
  double f_limit = alpha_;
  double slope0 = beta_;
  for (const auto& [t, w] : atoms_) {
    f_limit += w * (1.0 + t);
    slope0 += w * (1.0 + t) / t;
  }
  f.alpha_ = f_inf_slope > 0.0 ? 0.0 : 1.0 / f_limit;
  f.beta_ = alpha_ > 0.0 ? 0.0 : 1.0 / slope0;
  const double a = alpha_, b = beta_;
  auto at = atoms_;
  f.closure_ = [a, b, at](double t) {
    double v = a + b / t;
    for (const auto& [tt, w] : at) v += w * (1.0 + tt) / (1.0 + t * tt);
    return 1.0 / v;
  };
  f.label_ = "adjoint(" + describe() + ")";
  return f;
}

std::string RepresentingFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Named:
      switch (name_) {
        case Name::Arithmetic: return "arithmetic";
        case Name::Harmonic: return "harmonic";
        case Name::ParallelSum: return "parallel_sum";
        case Name::Geometric: return "geometric";
        case Name::PowerMean:
          os << "power_mean(" << power_alpha_ << ")";
          return os.str();
      }
      return "named";
    case Kind::Atoms:
      os << "atoms(alpha=" << alpha_ << ",beta=" << beta_ << ",#=" << atoms_.size() << ")";
      return os.str();
    case Kind::Closure:
      return label_.empty() ? "closure" : label_;
  }
  return "?";
}

}  // namespace opmean
