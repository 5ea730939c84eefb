// Permutation automorphisms of Z_J, their Koopman operators, and the two
// entropy stage constructions: Kolmogorov-Sinai stages from dynamically
// refined partitions, and quantum stages from mu-norms of projector words.
#pragma once

#include <functional>
#include <vector>

#include "munorm/finite.hpp"
#include "munorm/random.hpp"

namespace munorm {

/// A bijection of {0, ..., J-1}. Measure preserving for free (uniform mass).
class Permutation {
 public:
  explicit Permutation(std::vector<int> image);

  static Permutation identity(int J);
  /// The cyclic shift x -> x+1 (mod J).
  static Permutation shift(int J);
  static Permutation random(int J, Rng& rng);  // Fisher-Yates

  int points() const { return static_cast<int>(image_.size()); }
  int operator()(int x) const { return image_[x]; }
  const std::vector<int>& image() const { return image_; }

  Permutation inverse() const;
  SubsetMask preimage(const SubsetMask& X) const;

 private:
  std::vector<int> image_;
};

/// Multi-index (j_0, ..., j_N); each letter picks a partition block.
using PartitionWord = std::vector<int>;

/// Koopman operator of F in the value basis: (U_F f)(k) = f(F(k)).
FiniteOperator koopman(const Permutation& F);

/// Checks the intertwining U_F pi_X = pi_{F^{-1}(X)} U_F as matrices.
bool koopman_projector_identity(const Permutation& F, const SubsetMask& X,
                                double tol = 1e-12);

/// The refined cell F^{-N}(X_{j_N}) cap ... cap F^{-1}(X_{j_1}) cap X_{j_0}.
SubsetMask preimage_cell(const Permutation& F, const Partition& chi,
                         const PartitionWord& word);

/// Kolmogorov-Sinai stage: -sum over words of mu(cell) log mu(cell), with
/// 0 log 0 = 0 and the natural logarithm. Words have N+1 letters.
double ks_entropy_stage(const Permutation& F, const Partition& chi, int N);

/// The projector word pi_{X_{j_N}} U pi_{X_{j_{N-1}}} U ... U pi_{X_{j_0}}.
FiniteOperator projector_word(const FiniteOperator& U, const Partition& chi,
                              const PartitionWord& word);

/// Quantum stage: -sum over words of ||word||_mu^2 log ||word||_mu^2.
double quantum_entropy_stage(const FiniteOperator& U, const Partition& chi, int N);

/// [stage(n)/n for n = 1..n_max]; stages computed exactly, no extrapolation.
/// Throws when (block count)^n exceeds the word guard (10^7).
std::vector<double> entropy_rate_sequence(const FiniteOperator& U,
                                          const Partition& chi, int n_max);

/// Walks every projector word with up to max_letters letters, reusing the
/// partial products. Callback receives (word, word matrix in value basis).
void walk_projector_words(
    const FiniteOperator& U, const Partition& chi, int max_letters,
    const std::function<void(const PartitionWord&, const Eigen::MatrixXcd&)>& visit);

enum class ChainMatch { forward, reversed, both, neither };

/// || g_K^ U_F g_{K-1}^ ... U_F g_0^ ||_mu^2 together with the two candidate
/// integrals it could equal; `match` flags which candidate agrees.
///   forward : (1/J) sum_x prod_k |g_k(F^k(x))|^2
///   reversed: (1/J) sum_x prod_k |g_{K-k}(F^k(x))|^2
struct ChainMuNorm {
  double mu_norm_sq = 0.0;
  double forward_integral = 0.0;
  double reversed_integral = 0.0;
  ChainMatch match = ChainMatch::neither;
};

ChainMuNorm chain_mu_norm(const Permutation& F,
                          const std::vector<Eigen::VectorXcd>& gs,
                          double tol = 1e-10);

/// Finite analogue of the pair measure of a Koopman operator: mass 1/J on
/// each pair (F(a), a), zero elsewhere. Marginals are both uniform.
struct PairMassTable {
  Eigen::MatrixXd mass;          // mass(x', x'')
  Eigen::VectorXd row_marginal;  // sums over x''
  Eigen::VectorXd col_marginal;  // sums over x'
};

PairMassTable koopman_pair_measure(const Permutation& F);

/// Word-count guard for exhaustive stage computations.
inline constexpr long long kWordGuard = 10'000'000;

}  // namespace munorm
