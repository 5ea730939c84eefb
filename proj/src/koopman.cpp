#include "munorm/koopman.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

namespace munorm {

namespace {

double entropy_term(double p) { return p > 0.0 ? -p * std::log(p) : 0.0; }

long long ipow(long long base, int exp) {
  long long r = 1;
  for (int i = 0; i < exp; ++i) {
    if (r > kWordGuard) return r;
    r *= base;
  }
  return r;
}

// Permutation content of a value-basis 0/1 matrix, when it is one.
std::optional<Permutation> as_permutation(const FiniteOperator& U) {
  if (U.basis != Basis::value) return std::nullopt;
  const int J = U.points();
  std::vector<int> image(J, -1);
  for (int k = 0; k < J; ++k) {
    int hit = -1;
    for (int j = 0; j < J; ++j) {
      const cplx v = U.entries(k, j);
      if (v == cplx(0.0, 0.0)) continue;
      if (v != cplx(1.0, 0.0) || hit >= 0) return std::nullopt;
      hit = j;
    }
    if (hit < 0) return std::nullopt;
    image[k] = hit;  // (U f)(k) = f(image[k])
  }
  std::vector<char> seen(J, 0);
  for (int x : image) {
    if (seen[x]) return std::nullopt;
    seen[x] = 1;
  }
  return Permutation(image);
}

}  // namespace

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
  const int J = points();
  if (J < 1) throw std::invalid_argument("Permutation: empty image");
  std::vector<char> seen(J, 0);
  for (int x : image_) {
    if (x < 0 || x >= J || seen[x])
      throw std::invalid_argument("Permutation: image is not a bijection");
    seen[x] = 1;
  }
}

Permutation Permutation::identity(int J) {
  std::vector<int> img(J);
  for (int i = 0; i < J; ++i) img[i] = i;
  return Permutation(std::move(img));
}

Permutation Permutation::shift(int J) {
  std::vector<int> img(J);
  for (int i = 0; i < J; ++i) img[i] = (i + 1) % J;
  return Permutation(std::move(img));
}

Permutation Permutation::random(int J, Rng& rng) {
  std::vector<int> img(J);
  for (int i = 0; i < J; ++i) img[i] = i;
  for (int i = J - 1; i > 0; --i) std::swap(img[i], img[rng.uniform_int(0, i)]);
  return Permutation(std::move(img));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(points());
  for (int x = 0; x < points(); ++x) inv[image_[x]] = x;
  return Permutation(std::move(inv));
}

SubsetMask Permutation::preimage(const SubsetMask& X) const {
  if (X.space_points() != points())
    throw std::invalid_argument("Permutation::preimage: space mismatch");
  std::vector<int> out;
  for (int x = 0; x < points(); ++x)
    if (X.contains(image_[x])) out.push_back(x);
  return SubsetMask(points(), std::move(out));
}

FiniteOperator koopman(const Permutation& F) {
  const int J = F.points();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(J, J);
  for (int k = 0; k < J; ++k) m(k, F(k)) = 1.0;
  return FiniteOperator(std::move(m), Basis::value);
}

bool koopman_projector_identity(const Permutation& F, const SubsetMask& X,
                                double tol) {
  const FiniteOperator u = koopman(F);
  const FiniteOperator pi_x = projector(FiniteSpace(F.points()), X);
  const FiniteOperator pi_pre = projector(FiniteSpace(F.points()), F.preimage(X));
  const Eigen::MatrixXcd lhs = u.entries * pi_x.entries;
  const Eigen::MatrixXcd rhs = pi_pre.entries * u.entries;
  return (lhs - rhs).cwiseAbs().maxCoeff() <= tol;
}

SubsetMask preimage_cell(const Permutation& F, const Partition& chi,
                         const PartitionWord& word) {
  if (word.empty()) throw std::invalid_argument("preimage_cell: empty word");
  for (int j : word)
    if (j < 0 || j >= chi.block_count())
      throw std::invalid_argument("preimage_cell: block index out of range");
  // cell = intersection over n of F^{-n}(X_{j_n})
  SubsetMask cell = chi.blocks()[word[0]];
  SubsetMask pre = cell;
  for (std::size_t n = 1; n < word.size(); ++n) {
    pre = chi.blocks()[word[n]];
    for (std::size_t k = 0; k < n; ++k) pre = F.preimage(pre);
    cell = cell.intersect(pre);
  }
  return cell;
}

double ks_entropy_stage(const Permutation& F, const Partition& chi, int N) {
  if (N < 0) throw std::invalid_argument("ks_entropy_stage: N < 0");
  const int J = F.points();
  if (chi.space_points() != J)
    throw std::invalid_argument("ks_entropy_stage: partition mismatch");
  // Bucket points by itinerary (block labels of x, F(x), ..., F^N(x)).
  // Words with empty cells contribute 0, so this equals the word sum.
  std::vector<int> label(J);
  for (int b = 0; b < chi.block_count(); ++b)
    for (int x : chi.blocks()[b].members()) label[x] = b;
  const int base = chi.block_count();
  const bool small = (N + 1) * std::log2(std::max(base, 2)) < 62.0;
  double h = 0.0;
  if (small) {
    std::vector<unsigned long long> keys(J);
    for (int x = 0; x < J; ++x) {
      unsigned long long key = 0;
      int y = x;
      for (int n = 0; n <= N; ++n) {
        key = key * base + label[y];
        y = F(y);
      }
      keys[x] = key;
    }
    std::sort(keys.begin(), keys.end());
    for (int i = 0; i < J;) {
      int j = i;
      while (j < J && keys[j] == keys[i]) ++j;
      h += entropy_term(static_cast<double>(j - i) / J);
      i = j;
    }
  } else {
    std::map<std::vector<int>, int> buckets;
    for (int x = 0; x < J; ++x) {
      std::vector<int> itinerary(N + 1);
      int y = x;
      for (int n = 0; n <= N; ++n) {
        itinerary[n] = label[y];
        y = F(y);
      }
      ++buckets[itinerary];
    }
    for (const auto& [word, count] : buckets)
      h += entropy_term(static_cast<double>(count) / J);
  }
  return h;
}

void walk_projector_words(
    const FiniteOperator& U, const Partition& chi, int max_letters,
    const std::function<void(const PartitionWord&, const Eigen::MatrixXcd&)>& visit) {
  const FiniteOperator uval = value_basis(U);
  const int J = uval.points();
  if (chi.space_points() != J)
    throw std::invalid_argument("walk_projector_words: partition mismatch");
  if (max_letters < 1) return;
  const int K1 = chi.block_count();
  if (ipow(K1, max_letters) > kWordGuard)
    throw std::length_error("walk_projector_words: word count exceeds guard");

  const std::optional<Permutation> perm = as_permutation(uval);
  // One reusable buffer per depth: the product for the current prefix.
  std::vector<Eigen::MatrixXcd> stack(max_letters, Eigen::MatrixXcd(J, J));
  std::vector<char> in_block(static_cast<std::size_t>(K1) * J, 0);
  for (int b = 0; b < K1; ++b)
    for (int x : chi.blocks()[b].members()) in_block[b * J + x] = 1;

  PartitionWord word;
  const std::function<void(int)> descend = [&](int depth) {
    if (depth >= max_letters) return;
    for (int b = 0; b < K1; ++b) {
      Eigen::MatrixXcd& out = stack[depth];
      if (depth == 0) {
        out.setZero();
        for (int x : chi.blocks()[b].members()) out(x, x) = 1.0;
      } else {
        const Eigen::MatrixXcd& prev = stack[depth - 1];
        if (perm) {
          // Rows of U P are rows of P gathered through F, then masked.
          for (int k = 0; k < J; ++k) {
            if (in_block[b * J + k])
              out.row(k) = prev.row((*perm)(k));
            else
              out.row(k).setZero();
          }
        } else {
          out.noalias() = uval.entries * prev;
          for (int k = 0; k < J; ++k)
            if (!in_block[b * J + k]) out.row(k).setZero();
        }
      }
      word.push_back(b);
      visit(word, out);
      descend(depth + 1);
      word.pop_back();
    }
  };
  descend(0);
}

FiniteOperator projector_word(const FiniteOperator& U, const Partition& chi,
                              const PartitionWord& word) {
  const FiniteOperator uval = value_basis(U);
  const int J = uval.points();
  if (word.empty()) throw std::invalid_argument("projector_word: empty word");
  const FiniteSpace space(J);
  Eigen::MatrixXcd acc = projector(space, chi.blocks().at(word[0])).entries;
  for (std::size_t n = 1; n < word.size(); ++n) {
    acc = uval.entries * acc;
    const Eigen::MatrixXcd pi = projector(space, chi.blocks().at(word[n])).entries;
    acc = pi * acc;
  }
  return FiniteOperator(std::move(acc), Basis::value);
}

double quantum_entropy_stage(const FiniteOperator& U, const Partition& chi, int N) {
  if (N < 0) throw std::invalid_argument("quantum_entropy_stage: N < 0");
  const int J = value_basis(U).points();
  double h = 0.0;
  walk_projector_words(U, chi, N + 1,
                       [&](const PartitionWord& word, const Eigen::MatrixXcd& m) {
                         if (static_cast<int>(word.size()) != N + 1) return;
                         h += entropy_term(m.squaredNorm() / J);
                       });
  return h;
}

std::vector<double> entropy_rate_sequence(const FiniteOperator& U,
                                          const Partition& chi, int n_max) {
  if (n_max < 1) throw std::invalid_argument("entropy_rate_sequence: n_max < 1");
  const int J = value_basis(U).points();
  std::vector<double> stages(n_max, 0.0);
  walk_projector_words(U, chi, n_max,
                       [&](const PartitionWord& word, const Eigen::MatrixXcd& m) {
                         stages[word.size() - 1] += entropy_term(m.squaredNorm() / J);
                       });
  std::vector<double> rates(n_max);
  for (int n = 1; n <= n_max; ++n) rates[n - 1] = stages[n - 1] / n;
  return rates;
}

ChainMuNorm chain_mu_norm(const Permutation& F,
                          const std::vector<Eigen::VectorXcd>& gs, double tol) {
  if (gs.empty()) throw std::invalid_argument("chain_mu_norm: no factors");
  const int J = F.points();
  for (const auto& g : gs)
    if (static_cast<int>(g.size()) != J)
      throw std::invalid_argument("chain_mu_norm: vector length mismatch");
  const int K = static_cast<int>(gs.size()) - 1;

  const Eigen::MatrixXcd u = koopman(F).entries;
  Eigen::MatrixXcd chain = multiplication_operator(gs[0]).entries;
  for (int k = 1; k <= K; ++k)
    chain = multiplication_operator(gs[k]).entries * (u * chain);

  ChainMuNorm out;
  out.mu_norm_sq = chain.squaredNorm() / J;

  for (int x = 0; x < J; ++x) {
    double fwd = 1.0, rev = 1.0;
    int y = x;
    for (int k = 0; k <= K; ++k) {
      fwd *= std::norm(gs[k](y));
      rev *= std::norm(gs[K - k](y));
      y = F(y);
    }
    out.forward_integral += fwd / J;
    out.reversed_integral += rev / J;
  }

  const bool fwd_ok = std::abs(out.mu_norm_sq - out.forward_integral) <= tol;
  const bool rev_ok = std::abs(out.mu_norm_sq - out.reversed_integral) <= tol;
  out.match = fwd_ok && rev_ok ? ChainMatch::both
              : fwd_ok         ? ChainMatch::forward
              : rev_ok         ? ChainMatch::reversed
                               : ChainMatch::neither;
  return out;
}

PairMassTable koopman_pair_measure(const Permutation& F) {
  const int J = F.points();
  PairMassTable t;
  t.mass = Eigen::MatrixXd::Zero(J, J);
  for (int a = 0; a < J; ++a) t.mass(F(a), a) = 1.0 / J;
  t.row_marginal = t.mass.rowwise().sum();
  t.col_marginal = t.mass.colwise().sum();
  return t;
}

}  // namespace munorm
