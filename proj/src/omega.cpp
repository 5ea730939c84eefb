#include "munorm/omega.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace munorm {

namespace {

constexpr double kResonanceTol = 1e-9;
constexpr double kNearResonanceTol = 1e-6;

bool quadratic_resonant(double tau, index_t m, double* distance = nullptr) {
  const double q = tau * static_cast<double>(m) / kPi;
  const double d = std::abs(q - std::round(q));
  if (distance) *distance = d;
  return d <= kResonanceTol;
}

// (1/2pi) * integral over [u, v] of (x - x0)^n e^{ipx} dx, n in {0, 1, 2}.
cplx poly_exp_integral(double u, double v, double x0, int n, index_t p) {
  if (p == 0) {
    const double a = u - x0, b = v - x0;
    switch (n) {
      case 0: return (v - u) / kTwoPi;
      case 1: return (b * b - a * a) / 2.0 / kTwoPi;
      default: return (b * b * b - a * a * a) / 3.0 / kTwoPi;
    }
  }
  const cplx ip(0.0, static_cast<double>(p));
  const cplx eu = std::polar(1.0, p * u), ev = std::polar(1.0, p * v);
  const double a = u - x0, b = v - x0;
  cplx val;
  switch (n) {
    case 0:
      val = (ev - eu) / ip;
      break;
    case 1:
      val = (b * ev - a * eu) / ip - (ev - eu) / (ip * ip);
      break;
    default:
      val = (b * b * ev - a * a * eu) / ip - 2.0 * (b * ev - a * eu) / (ip * ip) +
            2.0 * (ev - eu) / (ip * ip * ip);
  }
  return val / kTwoPi;
}

// A piecewise-linear profile on [lo, hi]: value s0 + slope * (x - x0).
struct LinearPiece {
  double lo, hi;
  double x0;     // root/anchor of the linear factor
  double slope;  // g = slope * (x - x0) on the piece, or constant when slope == 0
  double level;  // used when slope == 0
};

// (1/2pi) * integral of g(x)^2 e^{ipx} over the piece.
cplx piece_sq_integral(const LinearPiece& piece, index_t p) {
  if (piece.slope == 0.0) {
    return piece.level * piece.level *
           poly_exp_integral(piece.lo, piece.hi, 0.0, 0, p);
  }
  return piece.slope * piece.slope *
         poly_exp_integral(piece.lo, piece.hi, piece.x0, 2, p);
}

std::vector<LinearPiece> outer_ramp(double alpha, double beta, double eps) {
  return {{alpha - eps, alpha, alpha - eps, 1.0 / eps, 0.0},
          {alpha, beta, 0.0, 0.0, 1.0},
          {beta, beta + eps, beta + eps, -1.0 / eps, 0.0}};
}

std::vector<LinearPiece> inner_ramp(double alpha, double beta, double eps) {
  return {{alpha, alpha + eps, alpha, 1.0 / eps, 0.0},
          {alpha + eps, beta - eps, 0.0, 0.0, 1.0},
          {beta - eps, beta, beta, -1.0 / eps, 0.0}};
}

}  // namespace

OmegaTable::OmegaTable(index_t window, double dt_bound)
    : window_(window), dt_bound_(dt_bound) {
  if (window < 0) throw std::invalid_argument("OmegaTable: negative window");
  const index_t n = 2 * window + 1;
  entries_ = Eigen::MatrixXcd::Zero(n, n);
  interval_ = Eigen::Matrix<index_t, Eigen::Dynamic, Eigen::Dynamic>::Zero(n, n);
}

bool OmegaTable::in_window(index_t m, index_t n) const {
  return std::abs(m) <= window_ && std::abs(n) <= window_;
}

cplx OmegaTable::omega(index_t m, index_t n) const {
  if (!in_window(m, n)) throw std::out_of_range("OmegaTable: index outside window");
  return entries_(m + window_, n + window_);
}

void OmegaTable::set(index_t m, index_t n, cplx value, index_t interval_len) {
  if (!in_window(m, n)) throw std::out_of_range("OmegaTable: index outside window");
  entries_(m + window_, n + window_) = value;
  interval_(m + window_, n + window_) = interval_len;
}

index_t OmegaTable::interval_len(index_t m, index_t n) const {
  if (!in_window(m, n)) throw std::out_of_range("OmegaTable: index outside window");
  return interval_(m + window_, n + window_);
}

double OmegaTable::hermitian_defect() const {
  double d = 0.0;
  for (index_t m = -window_; m <= window_; ++m)
    for (index_t n = -window_; n <= window_; ++n)
      d = std::max(d, std::abs(omega(m, n) - std::conj(omega(-m, -n))));
  return d;
}

double OmegaTable::max_row_l1() const {
  double mx = 0.0;
  for (index_t m = -window_; m <= window_; ++m) {
    double s = 0.0;
    for (index_t n = -window_; n <= window_; ++n) s += std::abs(omega(m, n));
    mx = std::max(mx, s);
  }
  return mx;
}

double OmegaTable::max_col_l1() const {
  double mx = 0.0;
  for (index_t n = -window_; n <= window_; ++n) {
    double s = 0.0;
    for (index_t m = -window_; m <= window_; ++m) s += std::abs(omega(m, n));
    mx = std::max(mx, s);
  }
  return mx;
}

cplx omega_window(const LatticeOperator& W, const IntInterval& I, index_t m,
                  index_t n) {
  const index_t B = W.band();
  cplx total = 0.0;
  for (index_t l = I.lo; l <= I.hi; ++l) {
    const index_t jlo = std::max(l + m - B, l - n - B);
    const index_t jhi = std::min(l + m + B, l - n + B);
    for (index_t j = jlo; j <= jhi; ++j)
      total += W.entry(l + m, j) * std::conj(W.entry(l, j + n));
  }
  return total / static_cast<double>(I.count());
}

cplx omega_closed_form(const LatticeOperator& W, index_t m, index_t n) {
  switch (W.kind()) {
    case LatticeOperator::Kind::multiplication: {
      const FourierPolynomial gbar = W.as_multiplication()->autocorrelation();
      return gbar.coeff(m + n);
    }
    case LatticeOperator::Kind::periodic: {
      const index_t tau = *W.period();
      return omega_window(W, IntInterval(0, tau - 1), m, n);
    }
    case LatticeOperator::Kind::convolution: {
      const ConvolutionSymbol& sym = *W.as_convolution();
      if (m + n != 0) return 0.0;
      if (sym.form() == ConvolutionSymbol::Form::rotation)
        return std::polar(1.0, sym.parameter() * static_cast<double>(m));
      if (sym.form() == ConvolutionSymbol::Form::quadratic_phase) {
        if (!quadratic_resonant(sym.parameter(), m)) return 0.0;
        return std::polar(1.0, sym.parameter() * static_cast<double>(m) *
                                   static_cast<double>(m));
      }
      throw NoClosedForm("omega_closed_form: table convolution has no closed form");
    }
    default:
      throw NoClosedForm("omega_closed_form: unsupported operator kind");
  }
}

OmegaTable omega_exact(const LatticeOperator& W, index_t M) {
  OmegaTable table(M, W.dt_norm());
  for (index_t m = -M; m <= M; ++m)
    for (index_t n = -M; n <= M; ++n) table.set(m, n, omega_closed_form(W, m, n));
  if (const ConvolutionSymbol* sym = W.as_convolution();
      sym && sym->form() == ConvolutionSymbol::Form::quadratic_phase) {
    for (index_t m = 1; m <= M; ++m) {
      double d = 0.0;
      if (!quadratic_resonant(sym->parameter(), m, &d) && d <= kNearResonanceTol)
        table.add_note("near-resonance at m=" + std::to_string(m));
    }
  }
  return table;
}

OmegaTable omega_estimated(const LatticeOperator& W, index_t M, const IntInterval& I,
                           int threads) {
  OmegaTable table(M, W.dt_norm());
  if (threads <= 1) {
    for (index_t m = -M; m <= M; ++m)
      for (index_t n = -M; n <= M; ++n)
        table.set(m, n, omega_window(W, I, m, n), I.count());
    return table;
  }
  const index_t rows = 2 * M + 1;
  std::vector<std::vector<cplx>> results(rows);
  std::atomic<index_t> next_row{0};
  const auto worker = [&] {
    for (index_t r; (r = next_row.fetch_add(1)) < rows;) {
      std::vector<cplx>& row = results[r];
      row.resize(rows);
      for (index_t n = -M; n <= M; ++n)
        row[n + M] = omega_window(W, I, r - M, n);
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (index_t m = -M; m <= M; ++m)
    for (index_t n = -M; n <= M; ++n)
      table.set(m, n, results[m + M][n + M], I.count());
  return table;
}

std::vector<ConvergenceRow> omega_convergence_report(const LatticeOperator& W,
                                                     index_t m, index_t n,
                                                     const std::vector<index_t>& lengths,
                                                     index_t start) {
  const cplx exact = omega_closed_form(W, m, n);
  const double c2 = W.dt_norm() * W.dt_norm();
  std::vector<ConvergenceRow> rows;
  rows.reserve(lengths.size());
  for (index_t len : lengths) {
    ConvergenceRow row;
    row.interval_len = len;
    row.abs_error = std::abs(omega_window(W, IntInterval::starting(start, len), m, n) -
                             exact);
    if (W.period()) {
      const double tau = static_cast<double>(*W.period());
      row.bound = len > tau ? tau * c2 * (1.0 / len + 1.0 / (len - tau))
                            : std::numeric_limits<double>::infinity();
    } else {
      row.bound = 2.0 * c2 / static_cast<double>(len);
    }
    rows.push_back(row);
  }
  return rows;
}

cplx v_from_table(const OmegaTable& table, index_t m, double a) {
  cplx s = 0.0;
  for (index_t n = -table.window(); n <= table.window(); ++n)
    s += table.omega(m, n) * std::polar(1.0, static_cast<double>(m + n) * a);
  return s;
}

cplx nu_eval(const OmegaTable& table, double x, double a) {
  cplx s = 0.0;
  for (index_t m = -table.window(); m <= table.window(); ++m)
    for (index_t n = -table.window(); n <= table.window(); ++n)
      s += table.omega(m, n) * std::polar(1.0, m * x + n * a);
  return s;
}

double mu_norm_regular(const OmegaTable& table, double tol) {
  const cplx w00 = table.omega(0, 0);
  if (std::abs(w00.imag()) > tol)
    throw std::runtime_error("mu_norm_regular: omega_{0,0} has an imaginary part");
  if (w00.real() < -tol)
    throw std::runtime_error("mu_norm_regular: omega_{0,0} is negative");
  return std::sqrt(std::max(0.0, w00.real()));
}

double average_trace_window(const LatticeOperator& W, const IntInterval& I) {
  const index_t B = W.band();
  double total = 0.0;
  for (index_t l = I.lo; l <= I.hi; ++l)
    for (index_t j = l - B; j <= l + B; ++j) total += std::norm(W.entry(l, j));
  return total / static_cast<double>(I.count());
}

std::vector<TraceInvarianceRow> unitary_trace_invariance(
    const LatticeOperator& W, const LatticeOperator& U,
    const std::vector<index_t>& lengths, index_t start) {
  const LatticeOperator wu = W * U;
  const LatticeOperator uw = U * W;
  std::vector<TraceInvarianceRow> rows;
  rows.reserve(lengths.size());
  for (index_t len : lengths) {
    const IntInterval I = IntInterval::starting(start, len);
    rows.push_back({len, average_trace_window(W, I), average_trace_window(wu, I),
                    average_trace_window(uw, I)});
  }
  return rows;
}

namespace {

index_t worst_interval_tag(index_t a, index_t b) {
  // 0 means exact; otherwise smaller #I is the weaker estimate.
  if (a == 0) return b;
  if (b == 0) return a;
  return std::min(a, b);
}

}  // namespace

OmegaTable product_omega_right(const OmegaTable& table, const FourierPolynomial& g) {
  const FourierPolynomial gbar = g.autocorrelation();
  const index_t d = gbar.degree();
  if (table.window() < d)
    throw std::invalid_argument("product_omega_right: window smaller than deg |g|^2");
  const index_t M = table.window() - d;
  OmegaTable out(M, table.dt_bound() * g.acf_norm());
  for (index_t m = -M; m <= M; ++m)
    for (index_t n = -M; n <= M; ++n) {
      cplx s = 0.0;
      index_t tag = 0;
      for (const auto& [q, gq] : gbar.coeffs()) {
        s += table.omega(m, n - q) * gq;
        tag = worst_interval_tag(tag, table.interval_len(m, n - q));
      }
      out.set(m, n, s, tag);
    }
  return out;
}

OmegaTable product_omega_left(const FourierPolynomial& g, const OmegaTable& table) {
  const FourierPolynomial gbar = g.autocorrelation();
  const index_t d = gbar.degree();
  if (table.window() < d)
    throw std::invalid_argument("product_omega_left: window smaller than deg |g|^2");
  const index_t M = table.window() - d;
  OmegaTable out(M, g.acf_norm() * table.dt_bound());
  for (index_t m = -M; m <= M; ++m)
    for (index_t n = -M; n <= M; ++n) {
      cplx s = 0.0;
      index_t tag = 0;
      for (const auto& [p, gp] : gbar.coeffs()) {
        s += gp * table.omega(m - p, n);
        tag = worst_interval_tag(tag, table.interval_len(m - p, n));
      }
      out.set(m, n, s, tag);
    }
  return out;
}

OmegaTable product_omega_both(const FourierPolynomial& g1, const OmegaTable& table,
                              const FourierPolynomial& g2) {
  const FourierPolynomial g1bar = g1.autocorrelation();
  const FourierPolynomial g2bar = g2.autocorrelation();
  const index_t d = std::max(g1bar.degree(), g2bar.degree());
  if (table.window() < d)
    throw std::invalid_argument("product_omega_both: window smaller than deg |g|^2");
  const index_t M = table.window() - d;
  OmegaTable out(M, g1.acf_norm() * table.dt_bound() * g2.acf_norm());
  for (index_t m = -M; m <= M; ++m)
    for (index_t n = -M; n <= M; ++n) {
      cplx s = 0.0;
      index_t tag = 0;
      for (const auto& [p, gp] : g1bar.coeffs())
        for (const auto& [q, gq] : g2bar.coeffs()) {
          s += gp * table.omega(m - p, n - q) * gq;
          tag = worst_interval_tag(tag, table.interval_len(m - p, n - q));
        }
      out.set(m, n, s, tag);
    }
  return out;
}

double gwg_mu_norm_sq(const OmegaTable& table, const FourierPolynomial& g1,
                      const FourierPolynomial& g2) {
  const FourierPolynomial g1bar = g1.autocorrelation();
  const FourierPolynomial g2bar = g2.autocorrelation();
  if (table.window() < std::max(g1bar.degree(), g2bar.degree()))
    throw std::invalid_argument("gwg_mu_norm_sq: window too small");
  cplx s = 0.0;
  for (const auto& [p, gp] : g1bar.coeffs())
    for (const auto& [q, gq] : g2bar.coeffs()) s += gp * table.omega(-p, -q) * gq;
  return s.real();
}

KernelMarginals kernel_marginals(const OmegaTable& table) {
  KernelMarginals m;
  for (index_t n = -table.window(); n <= table.window(); ++n)
    m.phi.set(n, table.omega(0, n));
  for (index_t k = -table.window(); k <= table.window(); ++k)
    m.psi.set(k, table.omega(k, 0));
  return m;
}

IndicatorMuNorm indicator_mu_norm(const OmegaTable& table, double alpha, double beta,
                                  double eps) {
  const double len = beta - alpha;
  if (!(len > 0.0) || !(len < kTwoPi))
    throw std::invalid_argument("indicator_mu_norm: degenerate interval");
  const double eps_cap = 0.49 * std::min(len, kTwoPi - len);
  if (!(eps > 0.0)) throw std::invalid_argument("indicator_mu_norm: eps must be > 0");
  eps = std::min(eps, eps_cap);

  const KernelMarginals marg = kernel_marginals(table);

  const auto pairing = [&](const std::vector<LinearPiece>& pieces) {
    cplx total = 0.0;
    for (const auto& [p, psi_p] : marg.psi.coeffs()) {
      cplx ip = 0.0;
      for (const auto& piece : pieces) ip += piece_sq_integral(piece, p);
      total += psi_p * ip;
    }
    return total.real();
  };

  IndicatorMuNorm out;
  out.epsilon = eps;
  out.lower = pairing(inner_ramp(alpha, beta, eps));
  out.upper = pairing(outer_ramp(alpha, beta, eps));
  out.estimate = 0.5 * (out.lower + out.upper);
  // ||g_eps - g_{-eps}||^2 = (4 eps / 3) / 2pi exactly; sup |psi| <= ACF norm.
  out.error_bar = (4.0 * eps / 3.0) / kTwoPi * marg.psi.acf_norm();

  cplx right = 0.0;
  for (const auto& [n, phi_n] : marg.phi.coeffs())
    right += phi_n * poly_exp_integral(alpha, beta, 0.0, 0, n);
  out.right_value = right.real();
  return out;
}

double mu_norm_integral_estimate(const LatticeOperator& W, int a_grid,
                                 const IntInterval& I) {
  if (a_grid < 1) throw std::invalid_argument("mu_norm_integral_estimate: empty grid");
  double total = 0.0;
  for (int t = 0; t < a_grid; ++t)
    total += v_window(W, I, 0, kTwoPi * t / a_grid).real();
  return total / a_grid;
}

TailBoundCheck omega_tail_bound_check(const LatticeOperator& W, index_t m, index_t M) {
  TailBoundCheck out;
  // omega_{m,n} vanishes unless |m+n| <= 2 * band, so the lhs sum is finite.
  const index_t smax = 2 * W.band();
  for (index_t s = -smax; s <= smax; ++s) {
    if (std::abs(s) < 2 * M) continue;
    out.lhs += std::abs(omega_closed_form(W, m, s - m));
  }
  const Majorating& maj = W.majorating();
  out.rhs = 2.0 * maj.sum() * maj.tail(M);
  out.slack = out.rhs - out.lhs;
  return out;
}

double fejer_kernel_min(const OmegaTable& table, double a, int x_grid,
                        index_t fejer_degree) {
  const index_t M = table.window();
  const index_t L = fejer_degree < 0 ? M : std::min(fejer_degree, M);
  // Fourier coefficients in x of the n-truncated kernel at this a.
  std::vector<cplx> xi(2 * L + 1);
  for (index_t m = -L; m <= L; ++m) {
    cplx s = 0.0;
    for (index_t n = -M; n <= M; ++n)
      s += table.omega(m, n) * std::polar(1.0, static_cast<double>(n) * a);
    xi[m + L] = s;
  }
  double mn = std::numeric_limits<double>::infinity();
  for (int t = 0; t < x_grid; ++t) {
    const double x = kTwoPi * t / x_grid;
    cplx val = 0.0;
    for (index_t m = -L; m <= L; ++m) {
      const double weight = 1.0 - std::abs(static_cast<double>(m)) / (L + 1);
      val += weight * xi[m + L] * std::polar(1.0, m * x);
    }
    mn = std::min(mn, val.real());
  }
  return mn;
}

}  // namespace munorm
