#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opmean/errors.hpp"
#include "opmean/harness.hpp"
#include "opmean/spectra.hpp"

using namespace opmean;

namespace {
Matrix diag2(double a, double b) {
  Matrix m(2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}
}  // namespace

TEST_CASE("eig_sym on diagonal input") {
  EigSym e = eig_sym(diag2(3, 1));
  CHECK(e.values[0] == doctest::Approx(1.0));
  CHECK(e.values[1] == doctest::Approx(3.0));
  // eigenvector columns are permutation of identity columns
  CHECK(std::abs(e.vectors(1, 0)) == doctest::Approx(1.0));
  CHECK(std::abs(e.vectors(0, 1)) == doctest::Approx(1.0));
}

TEST_CASE("eig_sym on identity") {
  EigSym e = eig_sym(Matrix::identity(4));
  for (int i = 0; i < 4; ++i) CHECK(e.values[i] == doctest::Approx(1.0));
}

TEST_CASE("eig_sym 2x2 by hand") {
  Matrix a(2, {2, 1, 1, 2});
  EigSym e = eig_sym(a);
  CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.values[1] == doctest::Approx(3.0).epsilon(1e-12));
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(e.vectors(0, 0)) == doctest::Approx(s));
  CHECK(std::abs(e.vectors(1, 1)) == doctest::Approx(s));
  // reconstruction
  Matrix r(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) r(i, j) += e.values[k] * e.vectors(i, k) * e.vectors(j, k);
  CHECK(frob_norm(r - a) <= 1e-12);
}

TEST_CASE("reconstruction and orthonormality on random PSD") {
  Rng rng(substream(101, 0));
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 7);
    PsdMatrix a = gen_psd(rng, n, n, 100.0);
    const Matrix& v = a.eigenvectors();
    Matrix vtv = transpose(v) * v;
    CHECK(frob_norm(vtv - Matrix::identity(n)) <= 1e-10);
    Matrix r(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          r(i, j) += a.eigenvalues()[k] * v(i, k) * v(j, k);
    CHECK(frob_norm(r - a.matrix()) <= 1e-10 * std::max(1.0, frob_norm(a.matrix())));
  }
}

TEST_CASE("fun_calc basics") {
  PsdMatrix a(diag2(4, 0));
  Matrix s = fun_calc(a, [](double x) { return std::sqrt(x); });
  CHECK(s(0, 0) == doctest::Approx(2.0));
  CHECK(s(1, 1) == doctest::Approx(0.0));

  // pseudo inverse square root respects the support convention
  Matrix is = a.power(-0.5).matrix();
  CHECK(is(0, 0) == doctest::Approx(0.5));
  CHECK(is(1, 1) == doctest::Approx(0.0));

  // identity function reproduces the matrix
  Matrix idm = fun_calc(a, [](double x) { return x; });
  CHECK(frob_norm(idm - a.matrix()) <= 1e-10 * std::max(1.0, frob_norm(a.matrix())));
}

TEST_CASE("fun_calc cube root against cube-and-compare oracle") {
  Rng rng(substream(7, 3));
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    PsdMatrix a = gen_psd(rng, n, n, 50.0);
    PsdMatrix b = a.power(1.0 / 3.0);
    Matrix b3 = b.matrix() * b.matrix() * b.matrix();
    CHECK(frob_norm(b3 - a.matrix()) <= 1e-8 * std::max(1.0, frob_norm(a.matrix())));
  }
}

TEST_CASE("fun_calc rejects non-finite values") {
  PsdMatrix a(diag2(4, 0));
  CHECK_THROWS_AS(fun_calc(a, [](double x) { return 1.0 / x; }), DomainError);
}

TEST_CASE("power laws on the support") {
  Rng rng(substream(11, 0));
  const double exps[3] = {1.0 / 3.0, 0.5, 2.0};
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 4);
    PsdMatrix a = gen_psd(rng, n, n - 1, 20.0);
    for (double r : exps)
      for (double s : exps) {
        Matrix lhs = a.power(r).power(s).matrix();
        Matrix rhs = a.power(r * s).matrix();
        CHECK(frob_norm(lhs - rhs) <= 1e-9 * std::max(1.0, frob_norm(rhs)));
      }
  }
}

TEST_CASE("factor_T trivial cases") {
  Rng rng(substream(23, 1));
  PsdMatrix b = gen_psd(rng, 4, 3, 10.0);
  PsdMatrix t1 = factor_T(b, b);
  CHECK(frob_norm(t1.matrix() - b.support().matrix()) <= 1e-9);

  PsdMatrix half = b.scaled(0.5);
  PsdMatrix t2 = factor_T(half, b);
  Matrix expect = 0.5 * b.support().matrix();
  CHECK(frob_norm(t2.matrix() - expect) <= 1e-9);
}

TEST_CASE("factor_T construct-then-recover oracle") {
  Rng rng(substream(23, 2));
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng.next_u64() % 5);
    PsdMatrix b = gen_psd(rng, n, n - 1, 30.0);
    PsdMatrix c = gen_psd(rng, n, n, 10.0);
    const Matrix broot = b.sqrt_m();
    PsdMatrix a(broot * c.matrix() * broot);
    PsdMatrix t = factor_T(a, b);
    const Matrix s = b.support().matrix();
    const Matrix expect = s * c.matrix() * s;
    CHECK(frob_norm(t.matrix() - expect) <= 1e-8 * std::max(1.0, frob_norm(expect)));
    // round trip
    const Matrix back = broot * t.matrix() * broot;
    CHECK(frob_norm(back - a.matrix()) <= 1e-9 * std::max(1.0, frob_norm(a.matrix())));
  }
}

TEST_CASE("factor_T rejects range violation") {
  PsdMatrix a(Matrix::identity(2));
  PsdMatrix b(diag2(1, 0));
  CHECK_THROWS_AS(factor_T(a, b), DomainError);
}

TEST_CASE("polar decomposition") {
  SUBCASE("psd input") {
    Rng rng(substream(31, 0));
    PsdMatrix a = gen_psd(rng, 4, 3, 10.0);
    Polar p = polar(a.matrix());
    CHECK(frob_norm(p.m.matrix() - a.matrix()) <= 1e-9 * std::max(1.0, frob_norm(a.matrix())));
    CHECK(frob_norm(p.u - a.support().matrix()) <= 1e-8);
  }
  SUBCASE("minus identity") {
    Matrix a = Matrix::identity(3);
    a *= -1.0;
    Polar p = polar(a);
    CHECK(frob_norm(p.m.matrix() - Matrix::identity(3)) <= 1e-10);
    CHECK(frob_norm(p.u - a) <= 1e-10);
  }
  SUBCASE("nilpotent") {
    Matrix a(2, {0, 1, 0, 0});
    Polar p = polar(a);
    CHECK(p.m.matrix()(0, 0) == doctest::Approx(0.0));
    CHECK(p.m.matrix()(1, 1) == doctest::Approx(1.0));
    CHECK(frob_norm(p.u * p.m.matrix() - a) <= 1e-9);
    Matrix utu = transpose(p.u) * p.u;
    CHECK(frob_norm(utu - p.m.support().matrix()) <= 1e-9);
  }
  SUBCASE("random square: a = u m and u^T u = support(m)") {
    Rng rng(substream(31, 5));
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 2 + static_cast<int>(rng.next_u64() % 5);
      Matrix a = gen_gaussian(rng, n);
      Polar p = polar(a);
      CHECK(frob_norm(p.u * p.m.matrix() - a) <= 1e-9 * std::max(1.0, frob_norm(a)));
      Matrix utu = transpose(p.u) * p.u;
      CHECK(frob_norm(utu - p.m.support().matrix()) <= 1e-9);
    }
  }
}

TEST_CASE("psd_order_gap") {
  PsdMatrix a(diag2(1, 2));
  CHECK(psd_order_gap(a, a) == doctest::Approx(0.0));
  PsdMatrix z(Matrix(2));
  CHECK(psd_order_gap(z, a) == doctest::Approx(1.0));

  Rng rng(substream(41, 0));
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 5);
    PsdMatrix a2 = gen_psd(rng, n, n, 20.0);
    Vector c(n);
    for (int i = 0; i < n; ++i) c[i] = rng.gauss();
    Matrix bump(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) bump(i, j) = c[i] * c[j];
    PsdMatrix b(a2.matrix() + bump);
    CHECK(psd_order_gap(a2, b) >= -1e-12 * frob_norm(b.matrix()));
  }
}

TEST_CASE("resolvent order equivalence") {
  // a <= b  iff  (1+a)^{-1} >= (1+b)^{-1}
  Rng rng(substream(53, 0));
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    PsdMatrix a = gen_psd(rng, n, n, 10.0);
    PsdMatrix bump = gen_psd(rng, n, 1 + static_cast<int>(rng.next_u64() % n), 10.0);
    PsdMatrix b(a.matrix() + bump.matrix());
    PsdMatrix onea(a.matrix() + Matrix::identity(n));
    PsdMatrix oneb(b.matrix() + Matrix::identity(n));
    Matrix ra = onea.power(-1.0).matrix();
    Matrix rb = oneb.power(-1.0).matrix();
    CHECK(min_eig(ra - rb) >= -1e-10);
  }
  // converse: pairs constructed in resolvent order come out matrix-ordered
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    PsdMatrix rlow = gen_psd(rng, n, n, 5.0).scaled(0.4);  // spectrum in (0, 0.4]
    PsdMatrix gap = gen_psd(rng, n, 1 + static_cast<int>(rng.next_u64() % n), 5.0);
    PsdMatrix rhigh(rlow.matrix() + gap.scaled(0.4).matrix());  // still < 1
    // a = r^{-1} - 1 from the larger resolvent, b from the smaller
    Matrix am = rhigh.power(-1.0).matrix() - Matrix::identity(n);
    Matrix bm = rlow.power(-1.0).matrix() - Matrix::identity(n);
    CHECK(min_eig(bm - am) >= -1e-8 * std::max(1.0, frob_norm(bm)));
  }
}

TEST_CASE("projection validation") {
  CHECK_THROWS_AS(Projection(diag2(0.5, 1.0)), DomainError);
  Projection p(diag2(1, 0));
  CHECK(p.rank() == 1);
  CHECK(p.complement().rank() == 1);
}
