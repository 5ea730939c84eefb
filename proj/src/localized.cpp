#include "munorm/localized.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace munorm {

namespace {

double wrap_to_pi(double d) {
  d = std::fmod(d, kTwoPi);
  if (d > kPi) d -= kTwoPi;
  if (d <= -kPi) d += kTwoPi;
  return d;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place iterative radix-2 FFT of the sign convention sum_t x_t e^{-2pi i k t / n}.
void fft_forward(std::vector<cplx>& x) {
  const int n = static_cast<int>(x.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = -kTwoPi / len;
    const cplx wl = std::polar(1.0, ang);
    for (int i = 0; i < n; i += len) {
      cplx w = 1.0;
      for (int k = 0; k < len / 2; ++k) {
        const cplx u = x[i + k];
        const cplx v = x[i + k + len / 2] * w;
        x[i + k] = u + v;
        x[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace

double GridFunction::l2_norm_sq() const {
  double s = 0.0;
  for (const cplx& v : samples) s += std::norm(v);
  return s / size();
}

cplx GridFunction::fourier_coeff(index_t k) const {
  const int n = size();
  cplx s = 0.0;
  for (int t = 0; t < n; ++t)
    s += samples[t] * std::polar(1.0, -kTwoPi * static_cast<double>(k) * t / n);
  return s / static_cast<double>(n);
}

LocalizedChecks localized_fourier_checks(const GridFunction& f, double a, double eps,
                                         int m, int l, index_t k_max) {
  const int n = f.size();
  if (n < (1 << 12))
    throw std::invalid_argument("localized_fourier_checks: grid must be >= 2^12 points");
  if (!(eps > 0.0) || eps >= kPi)
    throw std::invalid_argument("localized_fourier_checks: eps out of range");
  for (int t = 0; t < n; ++t) {
    const double x = kTwoPi * t / n;
    if (std::abs(wrap_to_pi(x - a)) > eps + 1e-12 && std::abs(f.samples[t]) != 0.0)
      throw std::invalid_argument("localized_fourier_checks: support violation");
  }

  const double norm_sq = f.l2_norm_sq();
  const double norm = std::sqrt(norm_sq);

  LocalizedChecks out;

  {  // ||f - e^{im(x-a)} f||
    double s = 0.0;
    for (int t = 0; t < n; ++t) {
      const double x = kTwoPi * t / n;
      const cplx factor = 1.0 - std::polar(1.0, m * (x - a));
      s += std::norm(factor * f.samples[t]);
    }
    out.modulation.lhs = std::sqrt(s / n);
    out.modulation.bound = std::abs(m) * eps * norm;
  }

  // Fourier coefficients for k in [-pad, pad], via FFT when the grid allows.
  const index_t pad = k_max + std::abs(m) + std::abs(l);
  if (pad >= n / 2)
    throw std::invalid_argument("localized_fourier_checks: k_max too large for grid");
  std::vector<cplx> coeff(2 * pad + 1);
  if (is_power_of_two(n)) {
    std::vector<cplx> bins = f.samples;
    fft_forward(bins);
    for (index_t k = -pad; k <= pad; ++k)
      coeff[k + pad] = bins[(k % n + n) % n] / static_cast<double>(n);
  } else {
    for (index_t k = -pad; k <= pad; ++k) coeff[k + pad] = f.fourier_coeff(k);
  }
  const auto fk = [&](index_t k) { return coeff[k + pad]; };

  {  // |f_m - e^{ila} f_{m+l}|
    out.coeff_shift.lhs = std::abs(fk(m) - std::polar(1.0, l * a) * fk(m + l));
    out.coeff_shift.bound =
        std::pow(eps, 1.5) / std::sqrt(kPi) * std::abs(l) * norm;
  }

  {  // |sum_k e^{-ima} f_k conj(f_{k+m}) - ||f||^2|
    cplx s = 0.0;
    for (index_t k = -k_max; k <= k_max; ++k) s += fk(k) * std::conj(fk(k + m));
    s *= std::polar(1.0, -static_cast<double>(m) * a);
    out.autocorrelation.lhs = std::abs(s - norm_sq);
    out.autocorrelation.bound = std::abs(m) * eps * norm_sq;
  }

  out.modulation.margin = out.modulation.bound - out.modulation.lhs;
  out.coeff_shift.margin = out.coeff_shift.bound - out.coeff_shift.lhs;
  out.autocorrelation.margin = out.autocorrelation.bound - out.autocorrelation.lhs;
  return out;
}

GridFunction bump_function(int n, double a, double eps,
                           const std::vector<cplx>& modulation) {
  GridFunction f;
  f.samples.assign(n, cplx(0.0));
  for (int t = 0; t < n; ++t) {
    const double x = kTwoPi * t / n;
    const double u = wrap_to_pi(x - a) / eps;
    if (std::abs(u) >= 1.0) continue;
    cplx poly = 0.0;
    double power = 1.0;
    for (const cplx& c : modulation) {
      poly += c * power;
      power *= u;
    }
    if (modulation.empty()) poly = 1.0;
    f.samples[t] = poly * std::exp(-1.0 / (1.0 - u * u));
  }
  return f;
}

}  // namespace munorm
