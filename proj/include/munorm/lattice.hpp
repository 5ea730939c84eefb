// Banded operators on the integer lattice, used as matrix models of
// diagonal-type operators on L^2 of the circle. Operators are held as lazy
// entry rules, never truncated matrices, so windowed sums over any interval
// are exact. Each operator carries a band bound and a majorating sequence
// c_s >= sup_j |entry(j+s, j)| whose sum is the DT norm.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "munorm/fourier_poly.hpp"
#include "munorm/types.hpp"

namespace munorm {

/// Symbol of a convolution operator: the diagonal sequence lambda_k.
class ConvolutionSymbol {
 public:
  enum class Form { rotation, quadratic_phase, table };

  /// lambda_k = e^{i k alpha}: Koopman operator of the rotation x -> x+alpha.
  static ConvolutionSymbol rotation(double alpha);
  /// lambda_k = e^{i tau k^2}.
  static ConvolutionSymbol quadratic_phase(double tau);
  /// lambda given on a finite window, zero outside.
  static ConvolutionSymbol table(index_t offset, std::vector<cplx> values);

  Form form() const { return form_; }
  double parameter() const { return param_; }  // alpha or tau
  index_t table_offset() const { return offset_; }
  const std::vector<cplx>& table_values() const { return values_; }

  cplx value(index_t k) const;
  double sup_abs() const;  // exact

 private:
  Form form_ = Form::rotation;
  double param_ = 0.0;
  index_t offset_ = 0;
  std::vector<cplx> values_;
};

/// Majorating sequence c_s with an exactness flag. `exact` means c_s equals
/// the true sup over the diagonal; otherwise it is an upper bound obtained
/// by propagation through sums/products.
struct Majorating {
  std::map<index_t, double> c;
  bool exact = true;

  double sum() const;
  double at(index_t s) const;
  /// sum of c_k over |k| >= cutoff.
  double tail(index_t cutoff) const;
};

class LatticeOperator {
 public:
  enum class Kind { convolution, multiplication, periodic, sum, product, adjoint, scale };

  static LatticeOperator convolution(ConvolutionSymbol symbol);
  static LatticeOperator multiplication(FourierPolynomial g);
  /// tau-periodic matrix given by one period of rows: entries keyed by
  /// (row in [0, tau), column - row).
  static LatticeOperator periodic(index_t tau,
                                  std::map<std::pair<index_t, index_t>, cplx> block);
  static LatticeOperator identity();  // rotation by 0

  LatticeOperator adjoint() const;
  LatticeOperator scaled(cplx a) const;
  friend LatticeOperator operator+(const LatticeOperator& a, const LatticeOperator& b);
  friend LatticeOperator operator*(const LatticeOperator& a, const LatticeOperator& b);

  cplx entry(index_t j, index_t k) const;
  /// Entries vanish for |j - k| > band().
  index_t band() const;
  Kind kind() const;
  /// Shift period of the entries when one is known: entry(j+t, k+t) = entry(j, k).
  std::optional<index_t> period() const;

  const Majorating& majorating() const;
  double dt_norm() const { return majorating().sum(); }

  /// Leaf payloads (null when the operator is not that leaf kind).
  const ConvolutionSymbol* as_convolution() const;
  const FourierPolynomial* as_multiplication() const;

  struct Impl;
  explicit LatticeOperator(std::shared_ptr<const Impl> impl);
  const Impl& impl() const { return *impl_; }

 private:
  std::shared_ptr<const Impl> impl_;
};

/// Dense snapshot of a row range of a lattice operator, stored per diagonal
/// offset. Entries outside the rows or the band read as zero. This is the
/// one place truncation happens; windowed sums on the lazy rules stay exact.
class BandBlock {
 public:
  BandBlock(const LatticeOperator& W, const IntInterval& rows);

  cplx entry(index_t j, index_t k) const;
  index_t band() const { return band_; }
  const IntInterval& rows() const { return rows_; }

 private:
  IntInterval rows_;
  index_t band_;
  std::vector<cplx> data_;  // (row - rows.lo) * (2 band + 1) + (k - j + band)
};

/// rho_I(lambda) = (1/#I) sum_{k in I} |lambda_k|^2.
double rho_interval(const ConvolutionSymbol& lambda, const IntInterval& I);

/// w_l(a) = sum_k W_{l,k} e^{i(l-k)a}; satisfies |w_l(a)| <= ||W||_DT.
cplx w_symbol(const LatticeOperator& W, index_t l, double a);

/// v_{I,m}(a) = (1/#I) sum_{l in I} w_{l+m}(a) conj(w_l(a)).
cplx v_window(const LatticeOperator& W, const IntInterval& I, index_t m, double a);

}  // namespace munorm
