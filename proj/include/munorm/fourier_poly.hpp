// Finitely supported Fourier coefficient maps k -> g_k, i.e. trigonometric
// polynomials g(x) = sum g_k e^{ikx} on the circle with the normalized
// Lebesgue measure dx / 2pi.
#pragma once

#include <map>

#include "munorm/types.hpp"

namespace munorm {

class FourierPolynomial {
 public:
  FourierPolynomial() = default;
  explicit FourierPolynomial(std::map<index_t, cplx> coeffs);

  static FourierPolynomial constant(cplx c);
  static FourierPolynomial harmonic(index_t k, cplx c = 1.0);

  const std::map<index_t, cplx>& coeffs() const { return coeffs_; }
  cplx coeff(index_t k) const;
  void set(index_t k, cplx v);

  bool empty() const { return coeffs_.empty(); }
  /// max |k| over the support (0 for the zero polynomial).
  index_t degree() const;

  cplx evaluate(double x) const;

  FourierPolynomial operator+(const FourierPolynomial& other) const;
  FourierPolynomial operator-(const FourierPolynomial& other) const;
  /// Pointwise product = convolution of coefficients.
  FourierPolynomial operator*(const FourierPolynomial& other) const;
  FourierPolynomial scaled(cplx a) const;
  /// Complex conjugate function: coefficients conj(g_{-k}).
  FourierPolynomial conjugated() const;

  /// Coefficients of |g|^2: q -> sum_p g_p conj(g_{p-q}).
  FourierPolynomial autocorrelation() const;

  /// sum |g_k|  (the absolutely-converging-Fourier-series norm).
  double acf_norm() const;
  /// ||g||^2 = (1/2pi) integral |g|^2 = sum |g_k|^2.
  double l2_norm_sq() const;
  /// max |g(x)| over a uniform grid.
  double sup_on_grid(int grid_points) const;

 private:
  std::map<index_t, cplx> coeffs_;  // nonzero entries only
  void prune();
};

}  // namespace munorm
