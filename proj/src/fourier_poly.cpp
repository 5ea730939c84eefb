#include "munorm/fourier_poly.hpp"

#include <algorithm>
#include <cmath>

namespace munorm {

namespace {
constexpr double kPruneEps = 0.0;  // keep exact zeros out, nothing else
}

FourierPolynomial::FourierPolynomial(std::map<index_t, cplx> coeffs)
    : coeffs_(std::move(coeffs)) {
  prune();
}

void FourierPolynomial::prune() {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (std::abs(it->second) <= kPruneEps)
      it = coeffs_.erase(it);
    else
      ++it;
  }
}

FourierPolynomial FourierPolynomial::constant(cplx c) {
  FourierPolynomial g;
  g.set(0, c);
  return g;
}

FourierPolynomial FourierPolynomial::harmonic(index_t k, cplx c) {
  FourierPolynomial g;
  g.set(k, c);
  return g;
}

cplx FourierPolynomial::coeff(index_t k) const {
  const auto it = coeffs_.find(k);
  return it == coeffs_.end() ? cplx(0.0) : it->second;
}

void FourierPolynomial::set(index_t k, cplx v) {
  if (v == cplx(0.0))
    coeffs_.erase(k);
  else
    coeffs_[k] = v;
}

index_t FourierPolynomial::degree() const {
  index_t d = 0;
  for (const auto& [k, v] : coeffs_) d = std::max(d, std::abs(k));
  return d;
}

cplx FourierPolynomial::evaluate(double x) const {
  cplx s = 0.0;
  for (const auto& [k, v] : coeffs_) s += v * std::polar(1.0, k * x);
  return s;
}

FourierPolynomial FourierPolynomial::operator+(const FourierPolynomial& other) const {
  FourierPolynomial out = *this;
  for (const auto& [k, v] : other.coeffs_) out.set(k, out.coeff(k) + v);
  return out;
}

FourierPolynomial FourierPolynomial::operator-(const FourierPolynomial& other) const {
  FourierPolynomial out = *this;
  for (const auto& [k, v] : other.coeffs_) out.set(k, out.coeff(k) - v);
  return out;
}

FourierPolynomial FourierPolynomial::operator*(const FourierPolynomial& other) const {
  FourierPolynomial out;
  for (const auto& [k1, v1] : coeffs_)
    for (const auto& [k2, v2] : other.coeffs_)
      out.set(k1 + k2, out.coeff(k1 + k2) + v1 * v2);
  return out;
}

FourierPolynomial FourierPolynomial::scaled(cplx a) const {
  FourierPolynomial out;
  for (const auto& [k, v] : coeffs_) out.set(k, a * v);
  return out;
}

FourierPolynomial FourierPolynomial::conjugated() const {
  FourierPolynomial out;
  for (const auto& [k, v] : coeffs_) out.set(-k, std::conj(v));
  return out;
}

FourierPolynomial FourierPolynomial::autocorrelation() const {
  FourierPolynomial out;
  for (const auto& [p, vp] : coeffs_)
    for (const auto& [s, vs] : coeffs_)  // q = p - s
      out.set(p - s, out.coeff(p - s) + vp * std::conj(vs));
  return out;
}

double FourierPolynomial::acf_norm() const {
  double s = 0.0;
  for (const auto& [k, v] : coeffs_) s += std::abs(v);
  return s;
}

double FourierPolynomial::l2_norm_sq() const {
  double s = 0.0;
  for (const auto& [k, v] : coeffs_) s += std::norm(v);
  return s;
}

double FourierPolynomial::sup_on_grid(int grid_points) const {
  double m = 0.0;
  for (int t = 0; t < grid_points; ++t)
    m = std::max(m, std::abs(evaluate(kTwoPi * t / grid_points)));
  return m;
}

}  // namespace munorm
