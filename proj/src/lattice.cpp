#include "munorm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <variant>

namespace munorm {

ConvolutionSymbol ConvolutionSymbol::rotation(double alpha) {
  ConvolutionSymbol s;
  s.form_ = Form::rotation;
  s.param_ = alpha;
  return s;
}

ConvolutionSymbol ConvolutionSymbol::quadratic_phase(double tau) {
  ConvolutionSymbol s;
  s.form_ = Form::quadratic_phase;
  s.param_ = tau;
  return s;
}

ConvolutionSymbol ConvolutionSymbol::table(index_t offset, std::vector<cplx> values) {
  ConvolutionSymbol s;
  s.form_ = Form::table;
  s.offset_ = offset;
  s.values_ = std::move(values);
  return s;
}

cplx ConvolutionSymbol::value(index_t k) const {
  switch (form_) {
    case Form::rotation:
      return std::polar(1.0, param_ * static_cast<double>(k));
    case Form::quadratic_phase:
      return std::polar(1.0, param_ * static_cast<double>(k) * static_cast<double>(k));
    case Form::table: {
      const index_t i = k - offset_;
      if (i < 0 || i >= static_cast<index_t>(values_.size())) return 0.0;
      return values_[i];
    }
  }
  return 0.0;
}

double ConvolutionSymbol::sup_abs() const {
  if (form_ != Form::table) return 1.0;
  double m = 0.0;
  for (const cplx& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Majorating::sum() const {
  double s = 0.0;
  for (const auto& [k, v] : c) s += v;
  return s;
}

double Majorating::at(index_t s) const {
  const auto it = c.find(s);
  return it == c.end() ? 0.0 : it->second;
}

double Majorating::tail(index_t cutoff) const {
  double s = 0.0;
  for (const auto& [k, v] : c)
    if (std::abs(k) >= cutoff) s += v;
  return s;
}

using BlockMap = std::map<std::pair<index_t, index_t>, cplx>;

struct ConvNode {
  ConvolutionSymbol symbol;
};
struct MultNode {
  FourierPolynomial g;
};
struct PeriodicNode {
  index_t tau;
  BlockMap block;  // (row mod tau, column - row) -> value
};
struct SumNode {
  std::shared_ptr<const LatticeOperator::Impl> a, b;
};
struct ProductNode {
  std::shared_ptr<const LatticeOperator::Impl> a, b;
};
struct AdjointNode {
  std::shared_ptr<const LatticeOperator::Impl> a;
};
struct ScaleNode {
  cplx factor;
  std::shared_ptr<const LatticeOperator::Impl> a;
};

struct LatticeOperator::Impl {
  std::variant<ConvNode, MultNode, PeriodicNode, SumNode, ProductNode, AdjointNode,
               ScaleNode>
      node;
  index_t band = 0;
  std::optional<index_t> period;
  mutable std::optional<Majorating> majorating_cache;

  cplx entry(index_t j, index_t k) const;
  const Majorating& majorating() const;
};

namespace {

using Impl = LatticeOperator::Impl;

std::shared_ptr<const Impl> make_impl(Impl&& impl) {
  return std::make_shared<const Impl>(std::move(impl));
}

// Exact majorating sequence by scanning one period of rows.
Majorating scan_periodic(const Impl& impl, index_t tau) {
  Majorating m;
  for (index_t s = -impl.band; s <= impl.band; ++s) {
    double c = 0.0;
    for (index_t r = 0; r < tau; ++r) c = std::max(c, std::abs(impl.entry(r + s, r)));
    if (c > 0.0) m.c[s] = c;
  }
  m.exact = true;
  return m;
}

}  // namespace

cplx Impl::entry(index_t j, index_t k) const {
  if (std::abs(j - k) > band) return 0.0;
  return std::visit(
      [&](const auto& n) -> cplx {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConvNode>) {
          return j == k ? n.symbol.value(k) : cplx(0.0);
        } else if constexpr (std::is_same_v<T, MultNode>) {
          return n.g.coeff(j - k);
        } else if constexpr (std::is_same_v<T, PeriodicNode>) {
          const auto it = n.block.find({mod_floor(j, n.tau), k - j});
          return it == n.block.end() ? cplx(0.0) : it->second;
        } else if constexpr (std::is_same_v<T, SumNode>) {
          return n.a->entry(j, k) + n.b->entry(j, k);
        } else if constexpr (std::is_same_v<T, ProductNode>) {
          const index_t lo = std::max(j - n.a->band, k - n.b->band);
          const index_t hi = std::min(j + n.a->band, k + n.b->band);
          cplx s = 0.0;
          for (index_t t = lo; t <= hi; ++t) s += n.a->entry(j, t) * n.b->entry(t, k);
          return s;
        } else if constexpr (std::is_same_v<T, AdjointNode>) {
          return std::conj(n.a->entry(k, j));
        } else {
          static_assert(std::is_same_v<T, ScaleNode>);
          return n.factor * n.a->entry(j, k);
        }
      },
      node);
}

const Majorating& Impl::majorating() const {
  if (majorating_cache) return *majorating_cache;
  Majorating m;
  if (std::holds_alternative<ConvNode>(node)) {
    const double c0 = std::get<ConvNode>(node).symbol.sup_abs();
    if (c0 > 0.0) m.c[0] = c0;
  } else if (std::holds_alternative<MultNode>(node)) {
    for (const auto& [k, v] : std::get<MultNode>(node).g.coeffs())
      m.c[k] = std::abs(v);
  } else if (period) {
    m = scan_periodic(*this, *period);
  } else if (std::holds_alternative<SumNode>(node)) {
    const auto& n = std::get<SumNode>(node);
    const Majorating &ma = n.a->majorating(), &mb = n.b->majorating();
    for (const auto& [k, v] : ma.c) m.c[k] += v;
    for (const auto& [k, v] : mb.c) m.c[k] += v;
    m.exact = false;
  } else if (std::holds_alternative<ProductNode>(node)) {
    const auto& n = std::get<ProductNode>(node);
    const Majorating &ma = n.a->majorating(), &mb = n.b->majorating();
    for (const auto& [s, va] : ma.c)
      for (const auto& [t, vb] : mb.c) m.c[s + t] += va * vb;
    m.exact = false;
  } else if (std::holds_alternative<AdjointNode>(node)) {
    const Majorating& ma = std::get<AdjointNode>(node).a->majorating();
    for (const auto& [k, v] : ma.c) m.c[-k] = v;
    m.exact = ma.exact;
  } else if (std::holds_alternative<ScaleNode>(node)) {
    const auto& n = std::get<ScaleNode>(node);
    const Majorating& ma = n.a->majorating();
    const double f = std::abs(n.factor);
    for (const auto& [k, v] : ma.c)
      if (f * v > 0.0) m.c[k] = f * v;
    m.exact = ma.exact;
  }
  majorating_cache = std::move(m);
  return *majorating_cache;
}

LatticeOperator::LatticeOperator(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

LatticeOperator LatticeOperator::convolution(ConvolutionSymbol symbol) {
  Impl impl{ConvNode{std::move(symbol)}, 0, std::nullopt, {}};
  return LatticeOperator(make_impl(std::move(impl)));
}

LatticeOperator LatticeOperator::multiplication(FourierPolynomial g) {
  const index_t band = g.degree();
  Impl impl{MultNode{std::move(g)}, band, 1, {}};
  return LatticeOperator(make_impl(std::move(impl)));
}

LatticeOperator LatticeOperator::periodic(index_t tau, BlockMap block) {
  if (tau < 1) throw std::invalid_argument("periodic: tau must be >= 1");
  index_t band = 0;
  for (const auto& [key, v] : block) {
    if (key.first < 0 || key.first >= tau)
      throw std::invalid_argument("periodic: row index outside [0, tau)");
    band = std::max(band, std::abs(key.second));
  }
  Impl impl{PeriodicNode{tau, std::move(block)}, band, tau, {}};
  return LatticeOperator(make_impl(std::move(impl)));
}

LatticeOperator LatticeOperator::identity() {
  return convolution(ConvolutionSymbol::rotation(0.0));
}

LatticeOperator LatticeOperator::adjoint() const {
  Impl impl{AdjointNode{impl_}, impl_->band, impl_->period, {}};
  return LatticeOperator(make_impl(std::move(impl)));
}

LatticeOperator LatticeOperator::scaled(cplx a) const {
  Impl impl{ScaleNode{a, impl_}, impl_->band, impl_->period, {}};
  return LatticeOperator(make_impl(std::move(impl)));
}

namespace {
std::optional<index_t> combined_period(const std::optional<index_t>& a,
                                       const std::optional<index_t>& b) {
  if (!a || !b) return std::nullopt;
  return std::lcm(*a, *b);
}
}  // namespace

LatticeOperator operator+(const LatticeOperator& a, const LatticeOperator& b) {
  Impl impl{SumNode{a.impl_, b.impl_}, std::max(a.impl_->band, b.impl_->band),
            combined_period(a.impl_->period, b.impl_->period), {}};
  return LatticeOperator(make_impl(std::move(impl)));
}

LatticeOperator operator*(const LatticeOperator& a, const LatticeOperator& b) {
  Impl impl{ProductNode{a.impl_, b.impl_}, a.impl_->band + b.impl_->band,
            combined_period(a.impl_->period, b.impl_->period), {}};
  return LatticeOperator(make_impl(std::move(impl)));
}

cplx LatticeOperator::entry(index_t j, index_t k) const { return impl_->entry(j, k); }

index_t LatticeOperator::band() const { return impl_->band; }

LatticeOperator::Kind LatticeOperator::kind() const {
  return std::visit(
      [](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ConvNode>) return Kind::convolution;
        else if constexpr (std::is_same_v<T, MultNode>) return Kind::multiplication;
        else if constexpr (std::is_same_v<T, PeriodicNode>) return Kind::periodic;
        else if constexpr (std::is_same_v<T, SumNode>) return Kind::sum;
        else if constexpr (std::is_same_v<T, ProductNode>) return Kind::product;
        else if constexpr (std::is_same_v<T, AdjointNode>) return Kind::adjoint;
        else return Kind::scale;
      },
      impl_->node);
}

std::optional<index_t> LatticeOperator::period() const { return impl_->period; }

const Majorating& LatticeOperator::majorating() const { return impl_->majorating(); }

const ConvolutionSymbol* LatticeOperator::as_convolution() const {
  if (const auto* n = std::get_if<ConvNode>(&impl_->node)) return &n->symbol;
  return nullptr;
}

const FourierPolynomial* LatticeOperator::as_multiplication() const {
  if (const auto* n = std::get_if<MultNode>(&impl_->node)) return &n->g;
  return nullptr;
}

BandBlock::BandBlock(const LatticeOperator& W, const IntInterval& rows)
    : rows_(rows), band_(W.band()) {
  const index_t width = 2 * band_ + 1;
  data_.assign(static_cast<std::size_t>(rows.count()) * width, cplx(0.0));
  for (index_t j = rows.lo; j <= rows.hi; ++j)
    for (index_t s = -band_; s <= band_; ++s)
      data_[static_cast<std::size_t>(j - rows.lo) * width + (s + band_)] =
          W.entry(j, j + s);
}

cplx BandBlock::entry(index_t j, index_t k) const {
  if (j < rows_.lo || j > rows_.hi || std::abs(k - j) > band_) return 0.0;
  const index_t width = 2 * band_ + 1;
  return data_[static_cast<std::size_t>(j - rows_.lo) * width + (k - j + band_)];
}

double rho_interval(const ConvolutionSymbol& lambda, const IntInterval& I) {
  double s = 0.0;
  for (index_t k = I.lo; k <= I.hi; ++k) s += std::norm(lambda.value(k));
  return s / static_cast<double>(I.count());
}

cplx w_symbol(const LatticeOperator& W, index_t l, double a) {
  cplx s = 0.0;
  for (index_t k = l - W.band(); k <= l + W.band(); ++k)
    s += W.entry(l, k) * std::polar(1.0, static_cast<double>(l - k) * a);
  return s;
}

cplx v_window(const LatticeOperator& W, const IntInterval& I, index_t m, double a) {
  cplx s = 0.0;
  if (m == 0) {
    for (index_t l = I.lo; l <= I.hi; ++l) s += std::norm(w_symbol(W, l, a));
  } else {
    for (index_t l = I.lo; l <= I.hi; ++l)
      s += w_symbol(W, l + m, a) * std::conj(w_symbol(W, l, a));
  }
  return s / static_cast<double>(I.count());
}

}  // namespace munorm
