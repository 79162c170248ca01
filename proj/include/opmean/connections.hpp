#ifndef OPMEAN_CONNECTIONS_HPP
#define OPMEAN_CONNECTIONS_HPP

#include <string>

#include "opmean/repfun.hpp"
#include "opmean/spectra.hpp"

namespace opmean {

struct ConnectionResult {
  PsdMatrix value;
  enum class Route { Spectral, Quadrature } route;
  int nodes = 0;  // parallel-sum evaluations on the quadrature route
  std::string notes;
};

// One-variable reduction: with h = a + b and T = T_{a/h},
//   a sigma b = h^{1/2} g(T) h^{1/2},  g(l) = l f((1-l)/l),  g(0)=beta, g(1)=alpha.
// T's eigenvalues are clamped to [0,1] and snapped to the endpoints within
// rank_tol; T_{a/h} + T_{b/h} = s(h) makes the two factors commute.
ConnectionResult connect_spectral(const RepresentingFunction& f, const PsdMatrix& a,
                                  const PsdMatrix& b);

// Integral route: alpha a + beta b + sum w (1+t)/t ((t a) : b) over the
// measure's atoms (exact) or its quadrature discretization (power means).
ConnectionResult connect_quadrature(const RepresentingFunction& f, const PsdMatrix& a,
                                    const PsdMatrix& b, int nodes = 2000);

// parallel sum a : b = h^{1/2}(T - T^2)h^{1/2}
PsdMatrix psum(const PsdMatrix& a, const PsdMatrix& b);

// weighted geometric mean; closed form when a is invertible, spectral route
// otherwise
PsdMatrix geomean_weighted(const PsdMatrix& a, const PsdMatrix& b, double alpha);

struct TransformerGap {
  Matrix lhs;  // c^T (a sigma b) c
  Matrix rhs;  // (c^T a c) sigma (c^T b c)
  double gap;  // min eigenvalue of rhs - lhs
  bool equality_expected;  // s(a+b) <= s(c c^T)
  bool equality_holds;     // ||rhs - lhs||_F <= 1e-8 * scale
};
TransformerGap transformer_gap(const RepresentingFunction& f, const PsdMatrix& a,
                               const PsdMatrix& b, const Matrix& c);

enum class BlockKind { Geo, Psum };
struct BlockCheck {
  bool member;
  double witness_eig;
};
// Geo: is [[a,c],[c,b]] PSD?  Psum: is diag(a,b) >= [[c,c],[c,c]]?
BlockCheck block_max_checks(const PsdMatrix& a, const PsdMatrix& b, const PsdMatrix& c,
                            BlockKind which);

}  // namespace opmean

#endif
