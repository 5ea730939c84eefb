// Grid-based checks of the three inequalities for Fourier coefficients of
// functions supported in a short arc [a - eps, a + eps] of the circle.
#pragma once

#include <vector>

#include "munorm/types.hpp"

namespace munorm {

/// A complex function sampled on the uniform grid x_t = 2 pi t / n.
struct GridFunction {
  std::vector<cplx> samples;

  int size() const { return static_cast<int>(samples.size()); }
  /// ||f||^2 = (1/2pi) int |f|^2 by the periodic rectangle rule.
  double l2_norm_sq() const;
  /// Fourier coefficient f_k by the same rule.
  cplx fourier_coeff(index_t k) const;
};

struct LocalizedInequality {
  double lhs = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - lhs
};

struct LocalizedChecks {
  LocalizedInequality modulation;       // ||f - e^{im(x-a)} f|| <= |m| eps ||f||
  LocalizedInequality coeff_shift;      // |f_m - e^{ila} f_{m+l}| <= eps^{3/2}/sqrt(pi) |l| ||f||
  LocalizedInequality autocorrelation;  // |sum_k e^{-ima} f_k conj(f_{k+m}) - ||f||^2| <= |m| eps ||f||^2
};

/// Evaluates the three inequalities for a grid function supported in
/// [a - eps, a + eps]. Throws if the support condition fails or the grid is
/// coarser than 2^12 points. `k_max` truncates the coefficient sum; the
/// omitted tail is tiny for smooth bumps and is covered by the margin slack.
LocalizedChecks localized_fourier_checks(const GridFunction& f, double a, double eps,
                                         int m, int l, index_t k_max = 1024);

/// Smooth bump supported in [a - eps, a + eps]: the standard C-infinity
/// profile exp(-1/(1-t^2)) modulated by a polynomial in t with the given
/// complex coefficients; sampled on an n-point grid.
GridFunction bump_function(int n, double a, double eps,
                           const std::vector<cplx>& modulation);

}  // namespace munorm
