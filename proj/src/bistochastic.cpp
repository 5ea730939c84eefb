#include "munorm/bistochastic.hpp"

#include <algorithm>
#include <cmath>

namespace munorm {

namespace {

// L^1 norm in the value basis: mean of |f(x)| over the uniform space.
double finite_l1(const Eigen::VectorXcd& coeffs) {
  const Eigen::VectorXcd values = dft(coeffs);
  return values.cwiseAbs().sum() / values.size();
}

}  // namespace

cplx BistochasticKernel::omega(index_t m, index_t n) const {
  if (mode_ == Mode::finite) {
    const index_t J = size_param_;
    return omega_(mod_floor(m, J), mod_floor(n, J));
  }
  const index_t M = size_param_;
  if (std::abs(m) > M || std::abs(n) > M)
    throw std::out_of_range("BistochasticKernel: omega index outside window");
  return omega_(m + M, n + M);
}

BistochasticKernel BistochasticKernel::from_finite(const FiniteOperator& W) {
  const FiniteOperator coeff = coefficient_basis(W);
  const index_t J = coeff.points();
  BistochasticKernel k;
  k.mode_ = Mode::finite;
  k.size_param_ = J;
  k.omega_ = Eigen::MatrixXcd::Zero(J, J);
  for (index_t m = 0; m < J; ++m)
    for (index_t n = 0; n < J; ++n) {
      cplx s = 0.0;
      for (index_t j = 0; j < J; ++j)
        for (index_t l = 0; l < J; ++l)
          s += coeff.entries(mod_floor(l + m, J), j) *
               std::conj(coeff.entries(l, mod_floor(j + n, J)));
      k.omega_(m, n) = s / static_cast<double>(J);
    }
  k.action_ = Eigen::MatrixXcd::Zero(J, J);
  for (index_t m = 0; m < J; ++m)
    for (index_t n = 0; n < J; ++n)
      k.action_(m, n) = k.omega_(m, mod_floor(-n, J));
  const double dt = finite_dt_norm(coeff);
  k.dt_bound_sq_ = dt * dt;
  k.source_unitary_ = unitarity_defect(coeff) <= 1e-10;
  return k;
}

BistochasticKernel BistochasticKernel::from_table(const OmegaTable& table,
                                                  bool unitary_source) {
  const index_t M = table.window();
  BistochasticKernel k;
  k.mode_ = Mode::torus;
  k.size_param_ = M;
  k.omega_ = Eigen::MatrixXcd::Zero(2 * M + 1, 2 * M + 1);
  k.action_ = Eigen::MatrixXcd::Zero(2 * M + 1, 2 * M + 1);
  for (index_t m = -M; m <= M; ++m)
    for (index_t n = -M; n <= M; ++n) {
      k.omega_(m + M, n + M) = table.omega(m, n);
      k.action_(m + M, n + M) = table.omega(m, -n);
    }
  k.dt_bound_sq_ = table.dt_bound() * table.dt_bound();
  k.source_unitary_ = unitary_source;
  return k;
}

Eigen::VectorXcd BistochasticKernel::apply(const Eigen::VectorXcd& coeffs) const {
  if (coeffs.size() != action_.cols())
    throw std::invalid_argument("BistochasticKernel::apply: size mismatch");
  return action_ * coeffs;
}

FourierPolynomial BistochasticKernel::apply(const FourierPolynomial& f) const {
  if (mode_ != Mode::torus)
    throw std::invalid_argument("BistochasticKernel::apply: finite kernel needs a vector");
  const index_t M = size_param_;
  if (f.degree() > M)
    throw std::invalid_argument("BistochasticKernel::apply: input exceeds window");
  Eigen::VectorXcd in = Eigen::VectorXcd::Zero(2 * M + 1);
  for (const auto& [k, v] : f.coeffs()) in(k + M) = v;
  const Eigen::VectorXcd out = action_ * in;
  FourierPolynomial g;
  for (index_t m = -M; m <= M; ++m)
    if (out(m + M) != cplx(0.0)) g.set(m, out(m + M));
  return g;
}

NonnegativityReport check_nonnegativity(const BistochasticKernel& kernel, int trials,
                                        std::uint64_t seed, double tol) {
  Rng rng(seed);
  NonnegativityReport report;
  report.trials = trials;
  report.seed = seed;
  double min_value = 0.0;

  const auto record_finite = [&](const Eigen::VectorXcd& f_coeffs) {
    const Eigen::VectorXcd out_values = dft(kernel.apply(f_coeffs));
    for (index_t i = 0; i < out_values.size(); ++i)
      min_value = std::min(min_value, out_values(i).real());
  };
  const auto record_torus = [&](const FourierPolynomial& f) {
    const FourierPolynomial out = kernel.apply(f);
    for (int t = 0; t < 512; ++t)
      min_value = std::min(min_value, out.evaluate(kTwoPi * t / 512).real());
  };

  // `trials` inputs of the form f = g conj(g), plus trials/4 indicator-style
  // nonnegative profiles.
  if (kernel.mode() == BistochasticKernel::Mode::finite) {
    const index_t J = kernel.size_param();
    for (int trial = 0; trial < trials; ++trial) {
      // f = g conj(g) through the coefficient convolution rule.
      Eigen::VectorXcd g(J);
      for (index_t i = 0; i < J; ++i) g(i) = rng.complex_normal();
      Eigen::VectorXcd f = Eigen::VectorXcd::Zero(J);
      for (index_t k = 0; k < J; ++k) {
        cplx s = 0.0;
        for (index_t j = 0; j < J; ++j)
          s += g(mod_floor(k + j, J)) * std::conj(g(j));
        f(k) = s;
      }
      record_finite(f);
    }
    for (int trial = 0; trial < trials / 4; ++trial) {
      // Indicator-style input: nonnegative values, coefficients by idft.
      Eigen::VectorXcd values = Eigen::VectorXcd::Zero(J);
      for (index_t x = 0; x < J; ++x)
        values(x) = rng.uniform01() < 0.5 ? 1.0 : 0.0;
      record_finite(idft(values));
    }
  } else {
    const index_t M = kernel.size_param();
    const index_t half = std::max<index_t>(1, M / 2);
    for (int trial = 0; trial < trials; ++trial) {
      FourierPolynomial g;
      for (index_t k = -half / 2; k <= half / 2; ++k)
        g.set(k, rng.complex_normal());
      record_torus(g.autocorrelation());
    }
    for (int trial = 0; trial < trials / 4; ++trial) {
      // Fejer-smoothed indicator of a random arc: nonnegative by positivity
      // of the Fejer kernel.
      const double lo = kTwoPi * rng.uniform01();
      const double len = 0.2 + (kTwoPi - 0.4) * rng.uniform01();
      FourierPolynomial f;
      for (index_t k = -half; k <= half; ++k) {
        const double fejer = 1.0 - std::abs(static_cast<double>(k)) / (half + 1);
        cplx ind;
        if (k == 0)
          ind = len / kTwoPi;
        else
          ind = (std::polar(1.0, -k * lo) - std::polar(1.0, -k * (lo + len))) /
                cplx(0.0, k * kTwoPi);
        f.set(k, fejer * ind);
      }
      record_torus(f);
    }
  }
  report.min_value = min_value;
  report.pass = min_value >= -tol;
  return report;
}

ResidualReport check_unit(const BistochasticKernel& kernel, double tol) {
  ResidualReport r;
  if (!kernel.source_unitary()) return r;
  r.applicable = true;
  if (kernel.mode() == BistochasticKernel::Mode::finite) {
    const index_t J = kernel.size_param();
    Eigen::VectorXcd one = Eigen::VectorXcd::Zero(J);
    one(0) = 1.0;
    r.residual = finite_l1(kernel.apply(one) - one);
  } else {
    const FourierPolynomial out = kernel.apply(FourierPolynomial::constant(1.0));
    const FourierPolynomial diff = out - FourierPolynomial::constant(1.0);
    r.residual = diff.acf_norm();
  }
  r.pass = r.residual <= tol;
  return r;
}

ResidualReport check_mass(const BistochasticKernel& kernel,
                          const Eigen::VectorXcd& coeffs, double tol) {
  ResidualReport r;
  if (!kernel.source_unitary()) return r;
  r.applicable = true;
  const Eigen::VectorXcd out = kernel.apply(coeffs);
  const index_t zero_pos =
      kernel.mode() == BistochasticKernel::Mode::finite ? 0 : kernel.size_param();
  r.residual = std::abs(out(zero_pos) - coeffs(zero_pos));
  r.pass = r.residual <= tol;
  return r;
}

L1BoundReport l1_bound(const BistochasticKernel& kernel) {
  L1BoundReport r;
  r.bound = kernel.dt_bound_sq();
  if (kernel.mode() == BistochasticKernel::Mode::finite) {
    // Induced L^1 -> L^1 norm in the value basis: max column sum of |B|,
    // B = V A V^{-1} (the uniform weights cancel).
    const index_t J = kernel.size_param();
    Eigen::MatrixXcd value_action(J, J);
    for (index_t n = 0; n < J; ++n) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(J);
      e(n) = 1.0;
      value_action.col(n) = dft(kernel.apply(idft(e)));
    }
    r.value = 0.0;
    for (index_t n = 0; n < J; ++n)
      r.value = std::max(r.value, value_action.col(n).cwiseAbs().sum());
  } else {
    // Through the marginal: ||W f||_1 <= sup phi * ||f||_1, phi(a) =
    // sum_n omega_{0,n} e^{ina}; sup taken on a grid.
    const index_t M = kernel.size_param();
    double sup_phi = 0.0;
    for (int t = 0; t < 1024; ++t) {
      const double a = kTwoPi * t / 1024;
      cplx phi = 0.0;
      for (index_t n = -M; n <= M; ++n)
        phi += kernel.omega(0, n) * std::polar(1.0, n * a);
      sup_phi = std::max(sup_phi, std::abs(phi));
    }
    r.value = sup_phi;
  }
  r.slack = r.bound - r.value;
  return r;
}

KoopmanOrientation koopman_case_compare(const Permutation& F, double tol) {
  const int J = F.points();
  const BistochasticKernel kernel = BistochasticKernel::from_finite(koopman(F));
  const Permutation Finv = F.inverse();
  KoopmanOrientation out;
  out.matches_forward = true;
  out.matches_inverse = true;
  for (int b = 0; b < J; ++b) {
    Eigen::VectorXcd values = Eigen::VectorXcd::Zero(J);
    values(b) = 1.0;
    const Eigen::VectorXcd image = dft(kernel.apply(idft(values)));
    for (int x = 0; x < J; ++x) {
      const cplx forward = values(F(x));     // (f o F)(x)
      const cplx inverse = values(Finv(x));  // (f o F^{-1})(x)
      if (std::abs(image(x) - forward) > tol) out.matches_forward = false;
      if (std::abs(image(x) - inverse) > tol) out.matches_inverse = false;
    }
  }
  return out;
}

}  // namespace munorm
