// The doubly stochastic operator built from omega coefficient tables: acts on
// Fourier coefficients by (Wf)_m = sum_n omega_{m,-n} f_n, finite (mod-J
// indices) or circle (window-truncated) flavor. Verification of boundedness,
// nonnegativity, unit preservation and mass preservation.
#pragma once

#include <Eigen/Dense>
#include <optional>

#include "munorm/finite.hpp"
#include "munorm/koopman.hpp"
#include "munorm/omega.hpp"
#include "munorm/random.hpp"

namespace munorm {

class BistochasticKernel {
 public:
  enum class Mode { finite, torus };

  Mode mode() const { return mode_; }
  /// J in finite mode, window M in torus mode.
  index_t size_param() const { return size_param_; }
  /// A(m, n) = omega_{m, -n}; row/column order is 0..J-1 (finite) or
  /// -M..M (torus, offset by M).
  const Eigen::MatrixXcd& action() const { return action_; }
  cplx omega(index_t m, index_t n) const;
  double dt_bound_sq() const { return dt_bound_sq_; }  // ||W||_DT^2 of the source
  bool source_unitary() const { return source_unitary_; }

  /// Finite case: omega by the mod-J formula from the coefficient-basis
  /// entries of W; conversion from the value basis is performed explicitly.
  static BistochasticKernel from_finite(const FiniteOperator& W);
  /// Circle case from a coefficient table (closed-form or estimated).
  static BistochasticKernel from_table(const OmegaTable& table, bool unitary_source);

  /// (Wf)_m = sum_n omega_{m,-n} f_n. Finite mode: f has length J.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& coeffs) const;
  FourierPolynomial apply(const FourierPolynomial& f) const;

 private:
  Mode mode_ = Mode::finite;
  index_t size_param_ = 0;
  Eigen::MatrixXcd action_;
  Eigen::MatrixXcd omega_;
  double dt_bound_sq_ = 0.0;
  bool source_unitary_ = false;
};

struct NonnegativityReport {
  int trials = 0;
  double min_value = 0.0;  // most negative evaluation seen
  bool pass = false;
  std::uint64_t seed = 0;
};

/// Applies the kernel to seeded nonnegative inputs f = g conj(g) (built by
/// the coefficient convolution rule) and to indicator-style profiles, and
/// records the most negative pointwise evaluation of the output.
NonnegativityReport check_nonnegativity(const BistochasticKernel& kernel, int trials,
                                        std::uint64_t seed, double tol = 1e-9);

struct ResidualReport {
  bool applicable = false;  // false when the source is not unitary
  double residual = 0.0;
  bool pass = false;
};

/// ||W 1 - 1||_1 for a unitary source (finite: exact L^1 in the value basis).
ResidualReport check_unit(const BistochasticKernel& kernel, double tol = 1e-10);

/// |(Wf)_0 - f_0| for a unitary source.
ResidualReport check_mass(const BistochasticKernel& kernel,
                          const Eigen::VectorXcd& coeffs, double tol = 1e-10);

struct L1BoundReport {
  double value = 0.0;  // finite: exact induced norm; torus: sup of the marginal
  double bound = 0.0;  // ||W||_DT^2
  double slack = 0.0;  // bound - value
};

L1BoundReport l1_bound(const BistochasticKernel& kernel);

struct KoopmanOrientation {
  bool matches_forward = false;  // kernel action equals f -> f o F
  bool matches_inverse = false;  // kernel action equals f -> f o F^{-1}
};

/// Compares the kernel of a Koopman source against both composition
/// orientations on all value-basis test functions.
KoopmanOrientation koopman_case_compare(const Permutation& F, double tol = 1e-12);

}  // namespace munorm
