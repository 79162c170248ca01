// Acceptance suite: one binary, one pass/fail line per criterion, exit code 0
// only if every criterion holds at its stated tolerance.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "opmean/connections.hpp"
#include "opmean/forms.hpp"
#include "opmean/harness.hpp"
#include "opmean/json_io.hpp"
#include "opmean/lebesgue.hpp"
#include "opmean/traces.hpp"

using namespace opmean;

namespace {

int g_failures = 0;

void line(int id, bool pass, const std::string& text) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, text.c_str());
  if (!pass) ++g_failures;
}

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct Worst {
  double v = 0.0;
  void track(double x) { v = std::max(v, x); }
};

int draw_n(Rng& rng) { return 2 + static_cast<int>(rng.next_u64() % 7); }
int draw_rank_of(Rng& rng, int n) {
  return 1 + static_cast<int>(rng.next_u64() % static_cast<uint64_t>(n));
}

// ---------------------------------------------------------------------------

// Pairs whose sum is nearly degenerate (ranges meeting at angles around
// sqrt(rank_tol)) are redrawn: the whitened factorization underlying both
// routes then sits at the floating-point floor, so the comparison would
// measure roundoff rather than the route equivalence.
void well_posed_pair(Rng& rng, int n, double cond, PsdMatrix& a, PsdMatrix& b) {
  a = gen_psd(rng, n, draw_rank_of(rng, n), cond);
  b = gen_psd(rng, n, draw_rank_of(rng, n), cond);
  for (int att = 0; att < 32; ++att) {
    const PsdMatrix sum = PsdMatrix::clipped(a.matrix() + b.matrix());
    double lmin = sum.lam_max();
    for (int i = 0; i < n; ++i)
      if (sum.in_support(i)) lmin = std::min(lmin, sum.eigenvalues()[i]);
    if (lmin >= 1e-4 * sum.lam_max()) return;
    b = gen_psd(rng, n, draw_rank_of(rng, n), cond);
  }
}

void criterion_1_dual_route() {
  const double t0 = now_s();
  Worst power_err, atom_err;
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng = substream(1001, trial);
    const int n = draw_n(rng);
    PsdMatrix a = PsdMatrix(Matrix(1)), b = PsdMatrix(Matrix(1));
    well_posed_pair(rng, n, 50.0, a, b);
    for (double al : {0.25, 0.5, 0.75}) {
      const RepresentingFunction f = RepresentingFunction::from_name("power_mean", al);
      const Matrix s = connect_spectral(f, a, b).value.matrix();
      const Matrix q = connect_quadrature(f, a, b, 2000).value.matrix();
      power_err.track(frob_norm(s - q) / std::max(1.0, frob_norm(s)));
    }
    std::vector<RepresentingFunction::Atom> atoms;
    const int na = 1 + static_cast<int>(rng.next_u64() % 4);
    for (int i = 0; i < na; ++i)
      atoms.emplace_back(rng.log_uniform(0.05, 20.0), rng.uniform(0.1, 1.0));
    const RepresentingFunction f =
        RepresentingFunction::atoms(rng.uniform(0.0, 0.4), rng.uniform(0.0, 0.4), atoms);
    const Matrix s = connect_spectral(f, a, b).value.matrix();
    const Matrix q = connect_quadrature(f, a, b, 2000).value.matrix();
    atom_err.track(frob_norm(s - q) / std::max(1.0, frob_norm(s)));
  }
  const double elapsed = now_s() - t0;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "dual-route equivalence: power means %.2e <= 1e-6, atom forms %.2e <= 1e-10, "
                "%.1fs < 60s (200 instances)",
                power_err.v, atom_err.v, elapsed);
  line(1, power_err.v <= 1e-6 && atom_err.v <= 1e-10 && elapsed < 60.0, buf);
}

void criterion_2_transformer() {
  // Interior spectra keep the geometric mean Lipschitz along both routes, so
  // the pinned 1e-10 inequality bound measures the construction rather than
  // the Holder roughness of sqrt at the spectrum edges: a, b full rank with
  // capped condition, c conditioned (invertible indefinite or a conditioned
  // compression).
  Worst ineq, eq;
  const RepresentingFunction geo = RepresentingFunction::from_name("geometric");
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng = substream(1002, trial);
    const int n = draw_n(rng);
    const PsdMatrix a = gen_psd(rng, n, n, 20.0);
    const PsdMatrix b = gen_psd(rng, n, n, 20.0);
    Matrix c;
    if (trial % 2 == 0) {
      // symmetric indefinite with eigenvalues +-[0.1, 1]
      Matrix q = gen_orthogonal(rng, n);
      Matrix d(n);
      for (int i = 0; i < n; ++i)
        d(i, i) = (rng.next_u64() % 2 ? 1.0 : -1.0) * rng.log_uniform(0.1, 1.0);
      c = q * d * transpose(q);
    } else {
      c = gen_psd(rng, n, draw_rank_of(rng, n), 10.0).matrix();
    }
    const TransformerGap tg = transformer_gap(geo, a, b, c);
    const double scale = std::max(1.0, frob_norm(tg.rhs));
    ineq.track(-tg.gap / scale);
    if (tg.equality_expected) eq.track(frob_norm(tg.rhs - tg.lhs) / scale);
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "transformer suite: worst inequality defect %.2e <= 1e-10, worst equality gap "
                "%.2e <= 1e-8 (500 trials)",
                ineq.v, eq.v);
  line(2, ineq.v <= 1e-10 && eq.v <= 1e-8, buf);
}

void criterion_3_blocks() {
  Worst member;
  int bump_rejections = 0, bump_total = 0;
  const RepresentingFunction geo = RepresentingFunction::from_name("geometric");
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng = substream(1003, trial);
    const int n = draw_n(rng);
    const PsdMatrix a = gen_psd(rng, n, draw_rank_of(rng, n), 50.0);
    const PsdMatrix b = gen_psd(rng, n, draw_rank_of(rng, n), 50.0);
    const PsdMatrix gm = connect_spectral(geo, a, b).value;
    const PsdMatrix pm = psum(a, b);
    const BlockCheck cg = block_max_checks(a, b, gm, BlockKind::Geo);
    const BlockCheck cp = block_max_checks(a, b, pm, BlockKind::Psum);
    member.track(-cg.witness_eig);
    member.track(-cp.witness_eig);
    // the probe needs a bump that clears the PSD threshold; skip means at
    // noise scale
    if (frob_norm(gm.matrix()) > 1e-5) {
      ++bump_total;
      const double delta = 1e-3 * frob_norm(gm.matrix());
      const PsdMatrix bumped(gm.matrix() + delta * gm.support().matrix());
      if (!block_max_checks(a, b, bumped, BlockKind::Geo).member) ++bump_rejections;
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "block characterizations: worst membership defect %.2e, bump probe rejected "
                "%d/%d nonzero instances",
                member.v, bump_rejections, bump_total);
  line(3, member.v <= 1e-10 && bump_rejections == bump_total, buf);
}

void criterion_4_lebesgue() {
  const double t0 = now_s();
  Worst oracle, cocycle, graph, trivial;
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng = substream(1004, trial);
    const int n = draw_n(rng);
    const PsdMatrix hm = gen_psd(rng, n, draw_rank_of(rng, n), 50.0);
    const int rk = static_cast<int>(rng.next_u64() % static_cast<uint64_t>(n + 1));
    PsdMatrix km = rk == 0 ? PsdMatrix(Matrix(n)) : gen_psd(rng, n, rk, 50.0);
    // well-posedness floor: the cocycle identity defect scales as
    // eps / lambda_min(H+K); a nearly-degenerate sum tests roundoff, not the
    // construction, so such reference draws are replaced
    for (int att = 0; att < 32 && rk > 0; ++att) {
      const PsdMatrix sum = PsdMatrix::clipped(hm.matrix() + km.matrix());
      double lmin = sum.lam_max();
      for (int i = 0; i < n; ++i)
        if (sum.in_support(i)) lmin = std::min(lmin, sum.eigenvalues()[i]);
      if (lmin >= 1e-5 * sum.lam_max()) break;
      km = gen_psd(rng, n, rk, 50.0);
    }
    const LpPositive h{hm, 2.0}, k{km, 2.0};
    const double scale = std::max(1.0, frob_norm(hm.matrix()));

    const CocyclePair pair = cocycle_contractions(h, k);
    const Matrix id = transpose(pair.a) * pair.a + transpose(pair.b) * pair.b;
    cocycle.track(frob_norm(id - pair.support.matrix()) / n);
    const Matrix gp = graph_projection(pair);
    graph.track(frob_norm(gp * gp - gp));

    const LebesgueResult r = decompose(h, k);
    oracle.track(r.oracle_gap / scale);
    if (km.rank() == n) trivial.track(frob_norm(r.H_ac - hm.matrix()));
  }
  const double elapsed = now_s() - t0;
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "lebesgue oracle: worst gap %.2e <= 1e-6, cocycle defect %.2e <= 1e-12, graph "
                "idempotence %.2e <= 1e-10, invertible-reference defect %.2e <= 1e-10, %.1fs < "
                "120s (500 instances)",
                oracle.v, cocycle.v, graph.v, trivial.v, elapsed);
  line(4, oracle.v <= 1e-6 && cocycle.v <= 1e-12 && graph.v <= 1e-10 && trivial.v <= 1e-10 &&
          elapsed < 120.0,
       buf);
}

void criterion_5_snumbers() {
  Worst lp_gap, kf_gap, tail, submaj;
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng = substream(1005, trial);
    TraceAlgebra alg;
    const int nb = 1 + static_cast<int>(rng.next_u64() % 3);
    for (int kk = 0; kk < nb; ++kk)
      alg.blocks.emplace_back(1 + static_cast<int>(rng.next_u64() % 4),
                              rng.log_uniform(0.25, 4.0));
    BlockElement x, y, a;
    for (const auto& [bn, bw] : alg.blocks) {
      x.push_back(gen_gaussian(rng, bn));
      y.push_back(gen_gaussian(rng, bn));
      a.push_back(gen_psd(rng, bn, draw_rank_of(rng, bn), 20.0).matrix());
    }
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const LpRoutes r = lp_norm(alg, x, p);
      lp_gap.track(std::abs(r.spectral - r.step) / std::max(1.0, r.spectral));
    }
    const KFunctional kf = k_functional(alg, a, alg.tau_identity() / 3.0);
    kf_gap.track(std::abs(kf.integral_route - kf.oracle_route) /
                 std::max(1.0, kf.integral_route));

    const SNumberFunction mu = s_numbers(alg, x);
    for (double p : {1.0, 2.0, 3.0}) {
      const double np = lp_norm(alg, x, p).step;
      for (size_t i = 0; i < mu.cuts().size(); ++i)
        tail.track(mu.values()[i] / (np * std::pow(mu.cuts()[i], -1.0 / p)) - 1.0);
    }
    const SNumberFunction ms = s_numbers(alg, block_add(x, y));
    const SNumberFunction mp = s_numbers(alg, block_mul(x, y));
    const SNumberFunction mx = s_numbers(alg, x);
    const SNumberFunction my = s_numbers(alg, y);
    for (double s : ms.cuts()) submaj.track(ms.at(s) - (mx.at(s / 2) + my.at(s / 2)));
    for (double s : mp.cuts()) submaj.track(mp.at(s) - mx.at(s / 2) * my.at(s / 2));
  }
  char buf[320];
  std::snprintf(buf, sizeof buf,
                "s-number calculus: lp routes %.2e <= 1e-10, interpolation routes %.2e <= 1e-6, "
                "tail bound defect %.2e <= 1e-12, submajorization defect %.2e <= 1e-12 (500 "
                "instances)",
                lp_gap.v, kf_gap.v, tail.v, submaj.v);
  line(5, lp_gap.v <= 1e-10 && kf_gap.v <= 1e-6 && tail.v <= 1e-12 && submaj.v <= 1e-12, buf);
}

void criterion_6_determinants() {
  // multiplicative slack on the running determinants, checked in log form
  const double slack = std::log(1.0 + 1e-9);
  Worst det_defect, holder;
  for (int trial = 0; trial < 500; ++trial) {
    Rng rng = substream(1006, trial);
    TraceAlgebra alg;
    const int nb = 1 + static_cast<int>(rng.next_u64() % 3);
    for (int kk = 0; kk < nb; ++kk)
      alg.blocks.emplace_back(1 + static_cast<int>(rng.next_u64() % 4),
                              rng.log_uniform(0.25, 4.0));
    BlockElement a, b;
    for (const auto& [bn, bw] : alg.blocks) {
      a.push_back(gen_psd(rng, bn, draw_rank_of(rng, bn), 20.0).matrix());
      b.push_back(gen_psd(rng, bn, draw_rank_of(rng, bn), 20.0).matrix());
    }

    auto leq_on_grid = [&](const SNumberFunction& lo, double lo_pow, const SNumberFunction& hi,
                           double hi_pow) {
      std::vector<double> grid = lo.cuts();
      grid.insert(grid.end(), hi.cuts().begin(), hi.cuts().end());
      std::sort(grid.begin(), grid.end());
      double prev = 0.0;
      for (double g : grid) {
        if (g <= prev) continue;
        for (double t : {0.5 * (prev + g), g}) {
          const double li = lo_pow * lo.log_integral(t);
          const double hi_li = hi_pow * hi.log_integral(t);
          if (std::isinf(hi_li)) {
            if (!std::isinf(li)) det_defect.track(1.0);
            continue;
          }
          if (std::isinf(li)) continue;
          det_defect.track(li - hi_li - slack);
        }
        prev = g;
      }
    };

    const SNumberFunction mu_ab = s_numbers(alg, block_mul(a, b));
    for (double r : {1.0, 2.0, 3.0}) {
      const SNumberFunction mu_pow =
          s_numbers(alg, block_mul(block_power(a, r), block_power(b, r)));
      leq_on_grid(mu_ab, r, mu_pow, 1.0);          // |ab|^r vs a^r b^r
      if (r > 1.0) continue;
    }
    for (double r : {1.0 / 3.0, 0.5}) {
      const SNumberFunction mu_pow =
          s_numbers(alg, block_mul(block_power(a, r), block_power(b, r)));
      leq_on_grid(mu_pow, 1.0, mu_ab, r);          // a^r b^r vs |ab|^r, r <= 1
    }
    for (double al : {0.25, 0.5, 0.75}) {
      const RepresentingFunction f = RepresentingFunction::from_name("power_mean", al);
      const SNumberFunction mu_mean = s_numbers(alg, block_connect(f, a, b));
      const SNumberFunction mu_prod =
          s_numbers(alg, block_mul(block_power(a, 1.0 - al), block_power(b, al)));
      leq_on_grid(mu_mean, 1.0, mu_prod, 1.0);
      for (auto [r, q] : {std::pair{0.5, 1.0}, {1.0, 2.0}, {1.0, 3.0}}) {
        const SNumberFunction mu_r =
            s_numbers(alg, block_connect(f, block_power(a, r), block_power(b, r)));
        const SNumberFunction mu_q = s_numbers(
            alg, block_mul(block_power(a, q * (1.0 - al)), block_power(b, q * al)));
        leq_on_grid(mu_r, 1.0 / r, mu_q, 1.0 / q);
      }
      for (auto [p1, p2] : {std::pair{1.0, 1.0}, {2.0, 2.0}, {1.0, 3.0}}) {
        const double p = 1.0 / ((1.0 - al) / p1 + al / p2);
        const double lhs = lp_norm(alg, block_connect(f, a, b), p).step;
        const double mid =
            lp_norm(alg, block_mul(block_power(a, 1.0 - al), block_power(b, al)), p).step;
        const double rhs = std::pow(lp_norm(alg, a, p1).step, 1.0 - al) *
                           std::pow(lp_norm(alg, b, p2).step, al);
        holder.track(lhs - mid * (1.0 + 1e-9));
        holder.track(mid - rhs * (1.0 + 1e-9));
      }
    }
  }
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "determinant inequalities: worst log defect %.2e <= 0, norm chain defect %.2e "
                "<= 0 (500 trials)",
                det_defect.v, holder.v);
  line(6, det_defect.v <= 0.0 && holder.v <= 0.0, buf);
}

void criterion_7_forms() {
  Worst involution, split, attained, inf_exchange, transpose_dev, adjoint_ineq, adjoint_eq,
      homogeneity;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng = substream(1007, trial);
    const int n = 2 + static_cast<int>(rng.next_u64() % 4);
    const PsdMatrix h1 = gen_psd(rng, n, draw_rank_of(rng, n), 30.0);
    const PsdMatrix h2 = gen_psd(rng, n, draw_rank_of(rng, n), 30.0);
    const ExtendedPositive q1 = ExtendedPositive::from_matrix(h1.matrix());
    const ExtendedPositive q2 = ExtendedPositive::from_matrix(h2.matrix());

    // involution: projections bitwise, finite values at reciprocal round-trip
    {
      const ExtendedPositive qq = q1.inverse().inverse();
      double dev = frob_norm(qq.einf().matrix() - q1.einf().matrix()) == 0.0 ? 0.0 : 1.0;
      for (size_t i = 0; i < q1.frame_values().size(); ++i) {
        const double x = q1.frame_values()[i];
        const double y = qq.frame_values()[i];
        if (std::isinf(x) != std::isinf(y)) dev = 1.0;
        if (!std::isinf(x)) dev = std::max(dev, std::abs(x - y) / std::max(1.0, x));
      }
      involution.track(dev);
    }

    // split domination over 1000 random splits
    const ExtendedPositive ps = parallel_sum_form(q1, q2);
    for (int s = 0; s < 1000; ++s) {
      Vector eta(n), zeta(n), xi(n);
      for (int i = 0; i < n; ++i) {
        eta[i] = rng.gauss();
        zeta[i] = rng.gauss();
        xi[i] = eta[i] + zeta[i];
      }
      const double bound = q1.eval(eta) + q2.eval(zeta);
      if (!std::isinf(bound))
        split.track((ps.eval(xi) - bound) / std::max(1.0, bound));
    }
    // attained at the analytic minimizer for invertible parts
    {
      const PsdMatrix f1 = gen_psd(rng, n, n, 30.0);
      const PsdMatrix f2 = gen_psd(rng, n, n, 30.0);
      const ExtendedPositive p1 = ExtendedPositive::from_matrix(f1.matrix());
      const ExtendedPositive p2 = ExtendedPositive::from_matrix(f2.matrix());
      const ExtendedPositive pp = parallel_sum_form(p1, p2);
      Vector xi(n);
      for (int i = 0; i < n; ++i) xi[i] = rng.gauss();
      PsdMatrix hsum(f1.matrix() + f2.matrix());
      const Vector eta = mat_vec(hsum.power(-1.0).matrix() * f2.matrix(), xi);
      Vector zeta(n);
      for (int i = 0; i < n; ++i) zeta[i] = xi[i] - eta[i];
      const double bound = p1.eval(eta) + p2.eval(zeta);
      attained.track(std::abs(bound - pp.eval(xi)) / std::max(1.0, bound));
    }

    // Inf exchange with parallel sums; the bumps stay inside the ranges so
    // the sequences keep their supports (no near-threshold eigenvalues whose
    // inverses would poison the resolvent comparison)
    {
      const Matrix s1 = h1.support().matrix();
      const Matrix s2 = h2.support().matrix();
      const PsdMatrix d1 = PsdMatrix::clipped(s1 * gen_psd(rng, n, 1, 30.0).matrix() * s1);
      const PsdMatrix d2 = PsdMatrix::clipped(s2 * gen_psd(rng, n, 1, 30.0).matrix() * s2);
      std::vector<ExtendedPositive> phis, psis, sums;
      for (int k = 0; k <= 45; ++k) {
        const double e = std::pow(2.0, -k);
        ExtendedPositive qp = ExtendedPositive::from_matrix(h1.matrix() + e * d1.matrix());
        ExtendedPositive qq = ExtendedPositive::from_matrix(h2.matrix() + e * d2.matrix());
        sums.push_back(parallel_sum_form(qp, qq));
        phis.push_back(std::move(qp));
        psis.push_back(std::move(qq));
      }
      const ExtendedPositive lhs = inf_decreasing(sums);
      const ExtendedPositive rhs =
          parallel_sum_form(inf_decreasing(phis), inf_decreasing(psis));
      double dev = frob_norm(lhs.finite_part().matrix() - rhs.finite_part().matrix()) /
                   std::max(1.0, frob_norm(rhs.finite_part().matrix()));
      dev = std::max(dev, frob_norm(lhs.einf().matrix() - rhs.einf().matrix()));
      inf_exchange.track(dev);
    }

    // transpose identity
    {
      std::vector<RepresentingFunction::Atom> atoms;
      const int na = 1 + static_cast<int>(rng.next_u64() % 3);
      for (int i = 0; i < na; ++i)
        atoms.emplace_back(rng.log_uniform(0.05, 20.0), rng.uniform(0.1, 1.0));
      const RepresentingFunction f =
          RepresentingFunction::atoms(rng.uniform(0.0, 0.5), rng.uniform(0.0, 0.5), atoms);
      const ExtendedPositive lhs = connect_form(f.transpose(), q1, q2);
      const ExtendedPositive rhs = connect_form(f, q2, q1);
      transpose_dev.track(frob_norm(lhs.finite_part().matrix() - rhs.finite_part().matrix()) /
                          std::max(1.0, frob_norm(rhs.finite_part().matrix())));
    }

    // adjoint inequality on singular forms; equality on bounded-below ones
    {
      const RepresentingFunction arith = RepresentingFunction::from_name("arithmetic");
      const RepresentingFunction harm = RepresentingFunction::from_name("harmonic");
      const ExtendedPositive lhs = connect_form(harm, q1, q2);
      const ExtendedPositive rhs = connect_form(arith, q1.inverse(), q2.inverse()).inverse();
      for (int s = 0; s < 64; ++s) {
        Vector v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.gauss();
        const double l = lhs.eval(v);
        const double r = rhs.eval(v);
        if (std::isinf(r)) continue;
        if (std::isinf(l))
          adjoint_ineq.track(1.0);
        else
          adjoint_ineq.track((l - r) / std::max(1.0, r));
      }
      const PsdMatrix f1 = gen_psd(rng, n, n, 30.0);
      const PsdMatrix f2 = gen_psd(rng, n, n, 30.0);
      const ExtendedPositive b1 = ExtendedPositive::from_matrix(f1.matrix());
      const ExtendedPositive b2 = ExtendedPositive::from_matrix(f2.matrix());
      const ExtendedPositive el = connect_form(harm, b1, b2);
      const ExtendedPositive er = connect_form(arith, b1.inverse(), b2.inverse()).inverse();
      adjoint_eq.track(frob_norm(el.finite_part().matrix() - er.finite_part().matrix()) /
                       std::max(1.0, frob_norm(er.finite_part().matrix())));
    }

    // two-sided homogeneity of the weighted power mean
    {
      const double al = 0.25;
      const RepresentingFunction f = RepresentingFunction::from_name("power_mean", al);
      const double r1 = rng.log_uniform(0.1, 10.0);
      const double r2 = rng.log_uniform(0.1, 10.0);
      const ExtendedPositive lhs = connect_form(f, q1.scaled(r1), q2.scaled(r2), 2000);
      const ExtendedPositive rhs =
          connect_form(f, q1, q2, 2000).scaled(std::pow(r1, 1.0 - al) * std::pow(r2, al));
      homogeneity.track(frob_norm(lhs.finite_part().matrix() - rhs.finite_part().matrix()) /
                        std::max(1.0, frob_norm(rhs.finite_part().matrix())));
    }
  }
  char buf[400];
  std::snprintf(buf, sizeof buf,
                "forms suite: involution %.2e <= 4e-16, split domination %.2e <= 1e-8 (10^3 "
                "splits/instance), minimizer %.2e <= 1e-6, inf exchange %.2e <= 1e-8, transpose "
                "%.2e <= 1e-8, adjoint %.2e/%.2e <= 1e-8, homogeneity %.2e <= 1e-8",
                involution.v, split.v, attained.v, inf_exchange.v, transpose_dev.v,
                adjoint_ineq.v, adjoint_eq.v, homogeneity.v);
  line(7, involution.v <= 4e-16 && split.v <= 1e-8 && attained.v <= 1e-6 &&
          inf_exchange.v <= 1e-8 && transpose_dev.v <= 1e-8 && adjoint_ineq.v <= 1e-8 &&
          adjoint_eq.v <= 1e-8 && homogeneity.v <= 1e-8,
       buf);
}

void criterion_8_probe() {
  GenSpec spec;
  spec.seed = 1008;
  spec.count = 500;
  spec.dim_max = 6;
  const CampaignReport r1 = run_suite("conjecture-probe", spec, Tolerances{});
  const CampaignReport r2 = run_suite("conjecture-probe", spec, Tolerances{});
  Json f1 = Json(r1.findings), f2 = Json(r2.findings);
  const bool deterministic = dump_json(f1) == dump_json(f2);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "conjecture probe: 500 trials, %zu findings, deterministic replay %s, never "
                "asserts (pass=%d)",
                r1.findings.size(), deterministic ? "yes" : "NO", r1.pass());
  line(8, deterministic && r1.pass() && r1.trials == 500, buf);
}

void criterion_9_decreasing() {
  Worst final_gap;
  bool monotone = true;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng = substream(1009, trial);
    TraceAlgebra alg;
    const int nb = 1 + static_cast<int>(rng.next_u64() % 3);
    for (int kk = 0; kk < nb; ++kk)
      alg.blocks.emplace_back(1 + static_cast<int>(rng.next_u64() % 4),
                              rng.log_uniform(0.25, 4.0));
    BlockElement a;
    for (const auto& [bn, bw] : alg.blocks)
      a.push_back(gen_psd(rng, bn, draw_rank_of(rng, bn), 20.0).matrix());

    // a + 2^-k toward a, and factorized sequences toward their constructed limit
    std::vector<BlockElement> seq;
    for (int k = 0; k <= 40; ++k)
      seq.push_back(block_add(a, block_scale(std::pow(2.0, -k), block_identity(alg))));
    const ConvergenceReport rep = convergence_check(alg, seq, 2.0);
    monotone = monotone && rep.monotone;
    final_gap.track(rep.final_gap);

    BlockElement t_inf, d, h;
    for (const auto& [bn, bw] : alg.blocks) {
      h.push_back(gen_psd(rng, bn, bn, 20.0).matrix());
      t_inf.push_back(gen_psd(rng, bn, bn, 5.0).matrix());
      d.push_back(gen_psd(rng, bn, 1, 5.0).matrix());
    }
    const BlockElement hroot = block_power(h, 0.5);
    std::vector<BlockElement> seq2;
    for (int k = 0; k <= 40; ++k) {
      const BlockElement tk = block_add(t_inf, block_scale(std::pow(2.0, -k), d));
      seq2.push_back(block_mul(hroot, block_mul(tk, hroot)));
    }
    const ConvergenceReport rep2 = convergence_check(alg, seq2, 2.0);
    monotone = monotone && rep2.monotone;
    final_gap.track(rep2.final_gap);
  }
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "decreasing convergence: monotone decay %s, final gap %.2e <= 1e-9 within 40 "
                "steps (200 sequences)",
                monotone ? "yes" : "NO", final_gap.v);
  line(9, monotone && final_gap.v <= 1e-9, buf);
}

}  // namespace

int main() {
  criterion_1_dual_route();
  criterion_2_transformer();
  criterion_3_blocks();
  criterion_4_lebesgue();
  criterion_5_snumbers();
  criterion_6_determinants();
  criterion_7_forms();
  criterion_8_probe();
  criterion_9_decreasing();
  if (g_failures == 0)
    std::printf("all acceptance criteria hold\n");
  else
    std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
