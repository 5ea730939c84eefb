#include <doctest.h>

#include <cmath>

#include "munorm/bistochastic.hpp"
#include "munorm/omega.hpp"
#include "munorm/random.hpp"

using namespace munorm;

namespace {

FourierPolynomial seeded_poly(std::uint64_t seed, index_t degree) {
  Rng rng(seed);
  FourierPolynomial g;
  for (index_t k = -degree; k <= degree; ++k) g.set(k, rng.complex_normal());
  return g;
}

LatticeOperator seeded_periodic(std::uint64_t seed, index_t tau, index_t band) {
  Rng rng(seed);
  std::map<std::pair<index_t, index_t>, cplx> block;
  for (index_t r = 0; r < tau; ++r)
    for (index_t s = -band; s <= band; ++s) block[{r, s}] = rng.complex_normal();
  return LatticeOperator::periodic(tau, std::move(block));
}

double dirichlet(index_t M, double theta) {
  double s = 1.0;
  for (index_t m = 1; m <= M; ++m) s += 2.0 * std::cos(m * theta);
  return s;
}

}  // namespace

TEST_CASE("windowed omega of structured operators") {
  const IntInterval I(-3, 14);
  const LatticeOperator id = LatticeOperator::identity();
  for (index_t m = -2; m <= 2; ++m)
    for (index_t n = -2; n <= 2; ++n) {
      const cplx expect = (m + n == 0) ? cplx(1.0) : cplx(0.0);
      CHECK(std::abs(omega_window(id, I, m, n) - expect) < 1e-14);
    }

  // Multiplication operators are 1-periodic: every window is already exact.
  const FourierPolynomial g = seeded_poly(3, 3);
  const FourierPolynomial gbar = g.autocorrelation();
  const LatticeOperator gm = LatticeOperator::multiplication(g);
  for (index_t m = -2; m <= 2; ++m)
    for (index_t n = -2; n <= 2; ++n)
      CHECK(std::abs(omega_window(gm, I, m, n) - gbar.coeff(m + n)) < 1e-12);

  // Rotations telescope exactly on every interval.
  const double alpha = 1.3;
  const LatticeOperator rot =
      LatticeOperator::convolution(ConvolutionSymbol::rotation(alpha));
  for (const IntInterval& J : {IntInterval(0, 5), IntInterval(-7, 100)})
    for (index_t m = -2; m <= 2; ++m)
      CHECK(std::abs(omega_window(rot, J, m, -m) - std::polar(1.0, m * alpha)) <
            1e-12);
}

TEST_CASE("closed-form tables") {
  // g = 1 + e^{ix}: |g|^2 = 2 + e^{ix} + e^{-ix}.
  FourierPolynomial g;
  g.set(0, 1.0);
  g.set(1, 1.0);
  const OmegaTable tg = omega_exact(LatticeOperator::multiplication(g), 3);
  for (index_t m = -3; m <= 3; ++m)
    for (index_t n = -3; n <= 3; ++n) {
      const index_t s = m + n;
      const cplx expect = s == 0 ? cplx(2.0) : (std::abs(s) == 1 ? cplx(1.0) : cplx(0.0));
      CHECK(std::abs(tg.omega(m, n) - expect) < 1e-14);
    }

  // Quadratic phase tau = pi/2: omega_{2,-2} = 1, omega_{1,n} = 0.
  const OmegaTable tq = omega_exact(
      LatticeOperator::convolution(ConvolutionSymbol::quadratic_phase(kPi / 2)), 3);
  CHECK(std::abs(tq.omega(2, -2) - cplx(1.0)) < 1e-14);
  for (index_t n = -3; n <= 3; ++n) CHECK(std::abs(tq.omega(1, n)) < 1e-14);

  const OmegaTable tid = omega_exact(LatticeOperator::identity(), 3);
  for (index_t m = -3; m <= 3; ++m) {
    CHECK(std::abs(tid.omega(m, -m) - cplx(1.0)) < 1e-14);
    if (m != 0) CHECK(std::abs(tid.omega(m, m)) < 1e-14);
  }

  CHECK_THROWS_AS(
      omega_exact(LatticeOperator::convolution(ConvolutionSymbol::table(0, {1.0})), 2),
      NoClosedForm);
  CHECK_THROWS_AS(omega_exact(LatticeOperator::identity() + LatticeOperator::identity(), 2),
                  NoClosedForm);
}

TEST_CASE("windowed estimates converge at the stated rate") {
  const LatticeOperator w = seeded_periodic(5, 2, 2);
  const std::vector<index_t> lens = {20, 40, 80, 160};
  const auto rows = omega_convergence_report(w, 1, -1, lens, 3);
  for (const auto& row : rows) CHECK(row.abs_error <= row.bound);

  // Multiples of tau are exact from any starting point.
  const cplx exact = omega_closed_form(w, 1, -1);
  for (index_t start : {0, 5, -7})
    CHECK(std::abs(omega_window(w, IntInterval::starting(start, 10), 1, -1) - exact) <
          1e-12);

  const LatticeOperator rot =
      LatticeOperator::convolution(ConvolutionSymbol::rotation(0.8));
  for (const auto& row : omega_convergence_report(rot, 2, -2, {7, 33}, -4))
    CHECK(row.abs_error < 1e-13);
}

TEST_CASE("v from tables") {
  const OmegaTable tid = omega_exact(LatticeOperator::identity(), 4);
  for (index_t m = -4; m <= 4; ++m)
    CHECK(std::abs(v_from_table(tid, m, 2.1) - cplx(1.0)) < 1e-13);

  const FourierPolynomial g = seeded_poly(7, 2);
  const OmegaTable tg = omega_exact(LatticeOperator::multiplication(g), 8);
  for (index_t m = -2; m <= 2; ++m)
    for (double a : {0.4, 2.2})
      CHECK(std::abs(v_from_table(tg, m, a) - std::norm(g.evaluate(a))) < 1e-10);

  const double c2 = tg.dt_bound() * tg.dt_bound();
  for (index_t m = -4; m <= 4; ++m)
    for (int t = 0; t < 12; ++t)
      CHECK(std::abs(v_from_table(tg, m, kTwoPi * t / 12)) <= c2 + 1e-10);
}

TEST_CASE("truncated kernels") {
  const index_t M = 5;
  const OmegaTable tid = omega_exact(LatticeOperator::identity(), M);
  for (double x : {0.0, 1.0})
    for (double a : {0.3, 2.9})
      CHECK(std::abs(nu_eval(tid, x, a) - dirichlet(M, x - a)) < 1e-11);

  const double alpha = 0.6;
  const OmegaTable trot = omega_exact(
      LatticeOperator::convolution(ConvolutionSymbol::rotation(alpha)), M);
  CHECK(std::abs(nu_eval(trot, 1.0, 0.2) - dirichlet(M, 1.0 - 0.2 + alpha)) < 1e-11);
}

TEST_CASE("mu-norm through omega_{0,0}") {
  CHECK(mu_norm_regular(omega_exact(LatticeOperator::identity(), 2)) ==
        doctest::Approx(1.0));

  const FourierPolynomial g = seeded_poly(11, 4);
  const OmegaTable tg = omega_exact(LatticeOperator::multiplication(g), 8);
  CHECK(mu_norm_regular(tg) == doctest::Approx(std::sqrt(g.l2_norm_sq())));

  CHECK(mu_norm_regular(omega_exact(
            LatticeOperator::convolution(ConvolutionSymbol::quadratic_phase(0.77)),
            2)) == doctest::Approx(1.0));

  OmegaTable bad(1, 1.0);
  bad.set(0, 0, cplx(0.0, 1.0));
  CHECK_THROWS(mu_norm_regular(bad));
  bad.set(0, 0, cplx(-1.0, 0.0));
  CHECK_THROWS(mu_norm_regular(bad));
}

TEST_CASE("windowed average trace") {
  const IntInterval I(2, 41);
  CHECK(average_trace_window(LatticeOperator::identity(), I) == doctest::Approx(1.0));

  const LatticeOperator w = seeded_periodic(13, 3, 2);
  CHECK(average_trace_window(w, I) ==
        doctest::Approx(omega_window(w, I, 0, 0).real()));

  // Windowed trace approaches ||W||_mu^2 within the periodic window bound.
  const double exact = omega_closed_form(w, 0, 0).real();
  const double c2 = w.dt_norm() * w.dt_norm();
  for (index_t len : {30, 90, 270}) {
    const double t = average_trace_window(w, IntInterval::starting(1, len));
    CHECK(std::abs(t - exact) <= 3.0 * c2 * (1.0 / len + 1.0 / (len - 3)));
  }
}

TEST_CASE("average trace is invariant under diagonal unitary factors") {
  const LatticeOperator w = seeded_periodic(17, 2, 1);
  const LatticeOperator u =
      LatticeOperator::convolution(ConvolutionSymbol::rotation(1.2));
  for (const auto& row : unitary_trace_invariance(w, u, {16, 64, 256})) {
    CHECK(row.trace_wu == doctest::Approx(row.trace_w).epsilon(1e-12));
    CHECK(row.trace_uw == doctest::Approx(row.trace_w).epsilon(1e-12));
  }
  const LatticeOperator q =
      LatticeOperator::convolution(ConvolutionSymbol::quadratic_phase(kPi / 3));
  const auto rows = unitary_trace_invariance(w, q, {16, 64});
  for (const auto& row : rows) {
    CHECK(std::abs(row.trace_wu - row.trace_w) < 1e-10);
    CHECK(std::abs(row.trace_uw - row.trace_w) < 1e-10);
  }
}

TEST_CASE("product with a multiplication operator, right factor") {
  const FourierPolynomial one = FourierPolynomial::constant(1.0);
  const LatticeOperator w = seeded_periodic(19, 2, 1);
  const OmegaTable base = omega_exact(w, 4);
  const OmegaTable same = product_omega_right(base, one);
  for (index_t m = -4; m <= 4; ++m)
    for (index_t n = -4; n <= 4; ++n)
      CHECK(std::abs(same.omega(m, n) - base.omega(m, n)) < 1e-14);

  // W = identity, g = e^{ix}: |g|^2 = 1, table unchanged.
  const OmegaTable tid = omega_exact(LatticeOperator::identity(), 3);
  const OmegaTable tshift = product_omega_right(tid, FourierPolynomial::harmonic(1));
  for (index_t m = -3; m <= 3; ++m)
    for (index_t n = -3; n <= 3; ++n)
      CHECK(std::abs(tshift.omega(m, n) - tid.omega(m, n)) < 1e-14);

  // Windowed oracle on the composed entry rule.
  FourierPolynomial g;
  g.set(0, 1.0);
  g.set(1, 1.0);
  const OmegaTable big = omega_exact(w, 6);
  const OmegaTable tilde = product_omega_right(big, g);
  const LatticeOperator composed = w * LatticeOperator::multiplication(g);
  const index_t len = 2048;
  for (index_t m = -2; m <= 2; ++m)
    for (index_t n = -2; n <= 2; ++n) {
      const cplx oracle =
          omega_window(composed, IntInterval::starting(0, len), m, n);
      CHECK(std::abs(tilde.omega(m, n) - oracle) <
            20.0 * w.dt_norm() * w.dt_norm() / len);
    }
}

TEST_CASE("product with a multiplication operator, left factor") {
  // Rotation base: omega~_{m,n} = gbar_{m+n} e^{-in alpha}.
  const double alpha = 0.9;
  const FourierPolynomial g = seeded_poly(23, 2);
  const FourierPolynomial gbar = g.autocorrelation();
  const OmegaTable base = omega_exact(
      LatticeOperator::convolution(ConvolutionSymbol::rotation(alpha)), 8);
  const OmegaTable tilde = product_omega_left(g, base);
  for (index_t m = -4; m <= 4; ++m)
    for (index_t n = -4; n <= 4; ++n)
      CHECK(std::abs(tilde.omega(m, n) -
                     gbar.coeff(m + n) * std::polar(1.0, -n * alpha)) < 1e-12);

  // Windowed oracle for g^ W with periodic W.
  const LatticeOperator w = seeded_periodic(29, 2, 1);
  const OmegaTable wtable = omega_exact(w, 8);
  const OmegaTable left = product_omega_left(g, wtable);
  const LatticeOperator composed = LatticeOperator::multiplication(g) * w;
  const index_t len = 2048;
  const double scale = std::pow(g.acf_norm() * w.dt_norm(), 2);
  for (index_t m = -2; m <= 2; ++m)
    for (index_t n = -2; n <= 2; ++n) {
      const cplx oracle =
          omega_window(composed, IntInterval::starting(-3, len), m, n);
      CHECK(std::abs(left.omega(m, n) - oracle) < 20.0 * scale / len);
    }
}

TEST_CASE("two-sided products compose and match the finite-space formula") {
  const FourierPolynomial g1 = seeded_poly(31, 1);
  const FourierPolynomial g2 = seeded_poly(37, 2);
  const LatticeOperator w = seeded_periodic(41, 3, 1);
  const OmegaTable base = omega_exact(w, 10);

  const OmegaTable both = product_omega_both(g1, base, g2);
  const OmegaTable chained = product_omega_left(g1, product_omega_right(base, g2));
  for (index_t m = -both.window(); m <= both.window(); ++m)
    for (index_t n = -both.window(); n <= both.window(); ++n)
      if (chained.in_window(m, n))
        CHECK(std::abs(both.omega(m, n) - chained.omega(m, n)) < 1e-12);

  // Finite-space cross-check of the sandwich formula, J = 8: the omega
  // coefficients of g1^ W g2^ equal the double convolution of the finite
  // table with the autocorrelations (all indices mod J).
  const int J = 8;
  Rng rng(43);
  Eigen::VectorXcd c1(J), c2(J);
  Eigen::MatrixXcd wm(J, J);
  for (int i = 0; i < J; ++i) {
    c1(i) = rng.complex_normal();
    c2(i) = rng.complex_normal();
    for (int j = 0; j < J; ++j) wm(i, j) = rng.complex_normal();
  }
  const FiniteOperator wop(wm, Basis::coefficient);
  const FiniteOperator left_mult(
      [&] {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(J, J);
        for (int r = 0; r < J; ++r)
          for (int c = 0; c < J; ++c) m(r, c) = c1((r - c + J) % J);
        return m;
      }(),
      Basis::coefficient);
  const FiniteOperator right_mult(
      [&] {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(J, J);
        for (int r = 0; r < J; ++r)
          for (int c = 0; c < J; ++c) m(r, c) = c2((r - c + J) % J);
        return m;
      }(),
      Basis::coefficient);
  const FiniteOperator sandwich(
      left_mult.entries * wop.entries * right_mult.entries, Basis::coefficient);

  const BistochasticKernel base_kernel = BistochasticKernel::from_finite(wop);
  const BistochasticKernel sandwich_kernel =
      BistochasticKernel::from_finite(sandwich);

  // Finite autocorrelations mod J.
  const auto autocorr = [&](const Eigen::VectorXcd& c) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(J);
    for (int q = 0; q < J; ++q)
      for (int p = 0; p < J; ++p) out(q) += c(p) * std::conj(c(((p - q) % J + J) % J));
    return out;
  };
  const Eigen::VectorXcd a1 = autocorr(c1), a2 = autocorr(c2);
  for (int m = 0; m < J; ++m)
    for (int n = 0; n < J; ++n) {
      cplx expect = 0.0;
      for (int p = 0; p < J; ++p)
        for (int q = 0; q < J; ++q)
          expect += a1(((m - p) % J + J) % J) * base_kernel.omega(p, q) *
                    a2(((n - q) % J + J) % J);
      CHECK(std::abs(sandwich_kernel.omega(m, n) - expect) < 1e-8);
    }
}

TEST_CASE("mu-norms of multiplication sandwiches") {
  const FourierPolynomial g = seeded_poly(47, 3);
  const FourierPolynomial one = FourierPolynomial::constant(1.0);

  const OmegaTable tid = omega_exact(LatticeOperator::identity(), 8);
  CHECK(gwg_mu_norm_sq(tid, g, one) == doctest::Approx(g.l2_norm_sq()));
  CHECK(gwg_mu_norm_sq(tid, one, one) == doctest::Approx(tid.omega(0, 0).real()));

  const OmegaTable trot = omega_exact(
      LatticeOperator::convolution(ConvolutionSymbol::rotation(2.2)), 8);
  CHECK(gwg_mu_norm_sq(trot, g, one) == doctest::Approx(g.l2_norm_sq()));
}

TEST_CASE("kernel marginals") {
  const KernelMarginals mid = kernel_marginals(omega_exact(LatticeOperator::identity(), 4));
  CHECK(std::abs(mid.phi.evaluate(1.0) - cplx(1.0)) < 1e-13);
  CHECK(std::abs(mid.psi.evaluate(2.0) - cplx(1.0)) < 1e-13);

  const FourierPolynomial g = seeded_poly(53, 3);
  const OmegaTable tg = omega_exact(LatticeOperator::multiplication(g), 8);
  const KernelMarginals m = kernel_marginals(tg);
  for (double x : {0.0, 1.7, 4.4}) {
    CHECK(std::abs(m.phi.evaluate(x).real() - std::norm(g.evaluate(x))) < 1e-10);
    CHECK(std::abs(m.psi.evaluate(x).real() - std::norm(g.evaluate(x))) < 1e-10);
  }
  const double c2 = tg.dt_bound() * tg.dt_bound();
  CHECK(m.phi.acf_norm() <= c2 + 1e-10);
  CHECK(m.psi.acf_norm() <= c2 + 1e-10);
}

TEST_CASE("interval indicator mu-norms") {
  const OmegaTable tid = omega_exact(LatticeOperator::identity(), 6);
  const double len = 1.8;
  const IndicatorMuNorm r = indicator_mu_norm(tid, 0.7, 0.7 + len, 0.05);
  CHECK(r.lower <= len / kTwoPi + 1e-12);
  CHECK(r.upper >= len / kTwoPi - 1e-12);
  CHECK(std::abs(r.estimate - len / kTwoPi) <= r.error_bar + 1e-12);
  CHECK(r.right_value == doctest::Approx(len / kTwoPi));

  // Halving eps halves the error bar.
  const IndicatorMuNorm r2 = indicator_mu_norm(tid, 0.7, 0.7 + len, 0.025);
  CHECK(r2.error_bar == doctest::Approx(0.5 * r.error_bar));

  CHECK_THROWS_AS(indicator_mu_norm(tid, 1.0, 1.0, 0.1), std::invalid_argument);
}

TEST_CASE("integral estimate of the squared mu-norm") {
  CHECK(mu_norm_integral_estimate(LatticeOperator::identity(), 64,
                                  IntInterval(0, 63)) == doctest::Approx(1.0));

  const FourierPolynomial g = seeded_poly(59, 3);
  const LatticeOperator gm = LatticeOperator::multiplication(g);
  CHECK(mu_norm_integral_estimate(gm, 128, IntInterval(0, 255)) ==
        doctest::Approx(g.l2_norm_sq()).epsilon(1e-10));

  const LatticeOperator w = seeded_periodic(61, 2, 1);
  const double est = mu_norm_integral_estimate(w, 128, IntInterval::starting(0, 512));
  const double c2 = w.dt_norm() * w.dt_norm();
  CHECK(std::abs(est - omega_closed_form(w, 0, 0).real()) <=
        2.0 * c2 * (1.0 / 512 + 1.0 / 510));
}

TEST_CASE("tail bounds on omega rows") {
  const LatticeOperator w = seeded_periodic(67, 2, 2);
  for (index_t m : {-2, 0, 1})
    for (index_t M : {1, 2, 3, 5}) {
      const TailBoundCheck tb = omega_tail_bound_check(w, m, M);
      CHECK(tb.slack >= -1e-9);
      if (M > w.band()) CHECK(tb.lhs == 0.0);
    }

  // Multiplication, m = 0: lhs is a plain coefficient tail sum.
  const FourierPolynomial g = seeded_poly(71, 4);
  const FourierPolynomial gbar = g.autocorrelation();
  const LatticeOperator gm = LatticeOperator::multiplication(g);
  for (index_t M : {1, 2, 3}) {
    const TailBoundCheck tb = omega_tail_bound_check(gm, 0, M);
    double lhs = 0.0;
    for (index_t s = -8; s <= 8; ++s)
      if (std::abs(s) >= 2 * M) lhs += std::abs(gbar.coeff(s));
    CHECK(tb.lhs == doctest::Approx(lhs));
    CHECK(tb.slack >= -1e-9);
  }
}

TEST_CASE("hermitian symmetry and l1 bounds on estimated tables") {
  const LatticeOperator w = seeded_periodic(73, 3, 2);
  const OmegaTable est = omega_estimated(w, 4, IntInterval::starting(2, 300));
  const double c2 = w.dt_norm() * w.dt_norm();
  const double window_err = 3.0 * c2 * (1.0 / 300 + 1.0 / 297);
  CHECK(est.hermitian_defect() <= 2.0 * window_err + 1e-10);
  CHECK(est.max_row_l1() <= c2 + 1e-10);
  CHECK(est.max_col_l1() <= c2 + 1e-10);
  CHECK(est.interval_len(1, 1) == 300);

  const OmegaTable exact = omega_exact(w, 4);
  CHECK(exact.hermitian_defect() < 1e-13);
  CHECK(exact.interval_len(1, 1) == 0);
}

TEST_CASE("parallel windowed tables match the sequential ones exactly") {
  const LatticeOperator w = seeded_periodic(83, 3, 2);
  const IntInterval I = IntInterval::starting(-5, 200);
  const OmegaTable seq = omega_estimated(w, 5, I, 1);
  const OmegaTable par = omega_estimated(w, 5, I, 4);
  for (index_t m = -5; m <= 5; ++m)
    for (index_t n = -5; n <= 5; ++n)
      CHECK(seq.omega(m, n) == par.omega(m, n));
}

TEST_CASE("fejer smoothing keeps measure kernels nonnegative") {
  const FourierPolynomial g = seeded_poly(79, 2);
  const OmegaTable tg =
      omega_exact(LatticeOperator::multiplication(g), 8 + 2 * g.degree());
  for (double a : {0.0, 0.9, 3.3})
    CHECK(fejer_kernel_min(tg, a, 512, 8) >= -1e-8);

  const OmegaTable tq = omega_exact(
      LatticeOperator::convolution(ConvolutionSymbol::quadratic_phase(kPi / 2)), 8);
  CHECK(fejer_kernel_min(tq, 1.0, 512) >= -1e-8);
}
