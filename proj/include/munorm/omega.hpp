// Correlation coefficient tables omega_{m,n} of lattice operators: windowed
// estimates, closed forms for the kinds that admit them, the nu(x, a) kernel
// and its marginals, mu-norms through omega_{0,0}, product formulas for
// multiplication sandwiches, and interval-indicator estimates.
#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "munorm/lattice.hpp"

namespace munorm {

struct NoClosedForm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class OmegaTable {
 public:
  OmegaTable(index_t window, double dt_bound);

  index_t window() const { return window_; }  // entries for |m|,|n| <= window
  double dt_bound() const { return dt_bound_; }

  bool in_window(index_t m, index_t n) const;
  cplx omega(index_t m, index_t n) const;
  void set(index_t m, index_t n, cplx value, index_t interval_len = 0);
  /// 0 for exact entries, otherwise the #I of the windowed estimate.
  index_t interval_len(index_t m, index_t n) const;

  const std::vector<std::string>& notes() const { return notes_; }
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  /// max |omega_{m,n} - conj(omega_{-m,-n})| over the window.
  double hermitian_defect() const;
  /// max over rows m (and columns n) of the in-window l1 mass.
  double max_row_l1() const;
  double max_col_l1() const;

 private:
  index_t window_;
  double dt_bound_;
  Eigen::MatrixXcd entries_;
  Eigen::Matrix<index_t, Eigen::Dynamic, Eigen::Dynamic> interval_;
  std::vector<std::string> notes_;
};

/// omega_{I,m,n} = (1/#I) sum_{l in I, j in Z} W_{l+m,j} conj(W_{l,j+n}).
/// The j-sum is finite because the band is.
cplx omega_window(const LatticeOperator& W, const IntInterval& I, index_t m, index_t n);

/// Closed-form omega_{m,n} for multiplication, periodic, rotation and
/// quadratic-phase convolution kinds. Throws NoClosedForm otherwise.
cplx omega_closed_form(const LatticeOperator& W, index_t m, index_t n);

/// Closed-form table on the window |m|,|n| <= M.
OmegaTable omega_exact(const LatticeOperator& W, index_t M);

/// Windowed-estimate table (every entry tagged with #I). Rows are
/// independent; `threads` > 1 splits them across workers, with the assembly
/// order fixed by index, so the result does not depend on scheduling.
OmegaTable omega_estimated(const LatticeOperator& W, index_t M, const IntInterval& I,
                           int threads = 1);

struct ConvergenceRow {
  index_t interval_len = 0;
  double abs_error = 0.0;
  double bound = 0.0;  // tau c^2 (1/#I + 1/(#I - tau)) periodic, 2 c^2 / #I diagonal
};

/// |omega_{I,m,n} - omega_{m,n}| for growing #I, with the applicable bound.
std::vector<ConvergenceRow> omega_convergence_report(const LatticeOperator& W,
                                                     index_t m, index_t n,
                                                     const std::vector<index_t>& lengths,
                                                     index_t start = 0);

/// v_m(a) = sum_{|n| <= M} omega_{m,n} e^{i(m+n)a}.
cplx v_from_table(const OmegaTable& table, index_t m, double a);

/// Truncated kernel nu(x, a) = sum_{|m|,|n| <= M} omega_{m,n} e^{imx + ina}.
cplx nu_eval(const OmegaTable& table, double x, double a);

/// sqrt(Re omega_{0,0}); throws if omega_{0,0} has a significant imaginary
/// part or a negative real part beyond tolerance.
double mu_norm_regular(const OmegaTable& table, double tol = 1e-12);

/// (1/#I) sum_{l in I, j in Z} |W_{l,j}|^2 == Re omega_{I,0,0}.
double average_trace_window(const LatticeOperator& W, const IntInterval& I);

struct TraceInvarianceRow {
  index_t interval_len = 0;
  double trace_w = 0.0, trace_wu = 0.0, trace_uw = 0.0;
};

/// Windowed average traces of W, WU and UW for growing intervals.
std::vector<TraceInvarianceRow> unitary_trace_invariance(
    const LatticeOperator& W, const LatticeOperator& U,
    const std::vector<index_t>& lengths, index_t start = 0);

/// Coefficients of nu(x,a) |g(a)|^2:  out_{m,n} = sum_q omega_{m,n-q} gbar_q.
OmegaTable product_omega_right(const OmegaTable& table, const FourierPolynomial& g);
/// Coefficients of |g(x)|^2 nu(x,a):  out_{m,n} = sum_p gbar_{m-p} omega_{p,n}.
OmegaTable product_omega_left(const FourierPolynomial& g, const OmegaTable& table);
/// Coefficients of |g1(x)|^2 nu(x,a) |g2(a)|^2.
OmegaTable product_omega_both(const FourierPolynomial& g1, const OmegaTable& table,
                              const FourierPolynomial& g2);

/// || g1^ W g2^ ||_mu^2 = sum_{m,n} g1bar_{-m} omega_{m,n} g2bar_{-n}.
double gwg_mu_norm_sq(const OmegaTable& table, const FourierPolynomial& g1,
                      const FourierPolynomial& g2);

struct KernelMarginals {
  FourierPolynomial phi;  // phi_n = omega_{0,n}:  (1/2pi) int nu(x, .) dx
  FourierPolynomial psi;  // psi_m = omega_{m,0}:  (1/2pi) int nu(., a) da
};

KernelMarginals kernel_marginals(const OmegaTable& table);

/// || 1_[alpha,beta]^ W ||_mu^2 bracketed through the inner/outer ramp family,
/// with the error bar Delta_eps = ||g_eps - g_{-eps}||^2 * sup |psi|. Also the
/// right-multiplication value || W 1_I^ ||_mu^2 = (1/2pi) int_I phi(a) da.
struct IndicatorMuNorm {
  double lower = 0.0;      // pairing with the inner ramp
  double upper = 0.0;      // pairing with the outer ramp
  double estimate = 0.0;   // midpoint
  double error_bar = 0.0;  // Delta_eps
  double right_value = 0.0;
  double epsilon = 0.0;
};

IndicatorMuNorm indicator_mu_norm(const OmegaTable& table, double alpha, double beta,
                                  double eps);

/// Trapezoid quadrature over a of v_{I,0}(a) = rho_I(L_a); approaches
/// omega_{0,0} for regular operators.
double mu_norm_integral_estimate(const LatticeOperator& W, int a_grid,
                                 const IntInterval& I);

struct TailBoundCheck {
  double lhs = 0.0;    // sum over |n+m| >= 2M of |omega_{m,n}|
  double rhs = 0.0;    // 2 c_bar * sum_{|k| >= M} c_k
  double slack = 0.0;  // rhs - lhs
};

TailBoundCheck omega_tail_bound_check(const LatticeOperator& W, index_t m, index_t M);

/// Minimum over an x-grid of the Fejer mean (in x) of the truncated kernel at
/// fixed a. Nonnegative up to truncation effects when nu(., a) is a measure.
/// `fejer_degree` < 0 means the table window; pick it <= window - (n-support
/// of the rows) to keep the smoothed coefficients exact.
double fejer_kernel_min(const OmegaTable& table, double a, int x_grid,
                        index_t fejer_degree = -1);

}  // namespace munorm
