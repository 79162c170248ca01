#ifndef OPMEAN_LEBESGUE_HPP
#define OPMEAN_LEBESGUE_HPP

#include "opmean/matrix.hpp"
#include "opmean/spectra.hpp"

namespace opmean {

// Positive cone element of the p-th root model: H stands for the p-th root of
// a density; the order on the cone is the matrix order on H.
struct LpPositive {
  PsdMatrix H;
  double p = 1.0;
};

// roots add: the reference-sum of two cone elements is H + K
PsdMatrix chi_root(const LpPositive& h, const LpPositive& k);

// contractions a = K^{1/2} S, b = H^{1/2} S with S = ((H+K)^+)^{1/2};
// a^T a + b^T b = s(H+K)
struct CocyclePair {
  Matrix a, b;
  Projection support;
};
CocyclePair cocycle_contractions(const LpPositive& h, const LpPositive& k);

// [[a a^T, a b^T], [b a^T, b b^T]]: the projection onto the closed graph
// {(a xi, b xi)}
Matrix graph_projection(const CocyclePair& pair);

struct ClosableResult {
  bool closable;       // ker a meets the support trivially
  int kernel_dim;      // dim(ker a  within  range(support))
};
ClosableResult closable_test(const CocyclePair& pair);

// p~ = 1 - u q0 u^T with b = u h polar and q0 the projection onto
// ker(a) within the support; satisfies p~ b a^T = b a^T and
// p~ b b^T = b b^T p~
Projection regular_projection(const CocyclePair& pair);

struct LebesgueResult {
  Projection p_tilde;
  Matrix H_ac;         // H^{1/2} p~ H^{1/2}
  Matrix H_sing;       // H - H_ac, the exact complement
  Matrix oracle_H_ac;  // independent parallel-sum supremum
  double oracle_gap;   // ||H_ac - oracle_H_ac||_F
  int iterations;      // oracle doublings used
};
LebesgueResult decompose(const LpPositive& h, const LpPositive& k);

// sup_n H : (2^n K), detected by gap stabilization; a secondary stop fires
// when the gaps hit the floating-point floor of the graded eigenproblem.
// Throws ConvergenceError only if the sequence is still moving at the cap.
PsdMatrix ando_oracle(const LpPositive& h, const LpPositive& k, double tol = -1.0,
                      int* iterations_out = nullptr);

}  // namespace opmean

#endif
