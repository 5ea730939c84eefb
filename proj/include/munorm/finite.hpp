// The uniform finite probability space Z_J: partitions, projectors, the
// mu-norm by exact formula and by brute-force minimization over all set
// partitions, and the discrete Fourier transform tying the value basis
// (pointwise samples) to the coefficient basis (discrete harmonics).
#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "munorm/types.hpp"

namespace munorm {

/// Z_J with the uniform measure; every point has mass 1/J.
struct FiniteSpace {
  int points = 1;  // J >= 1

  explicit FiniteSpace(int J) : points(J) {
    if (J < 1) throw std::invalid_argument("FiniteSpace: J must be >= 1");
  }
  double point_mass() const { return 1.0 / points; }
};

/// A subset of {0, ..., J-1}; measure |members| / J.
class SubsetMask {
 public:
  SubsetMask() = default;
  SubsetMask(int space_points, std::vector<int> members);

  static SubsetMask empty_set(int space_points) { return SubsetMask(space_points, {}); }
  static SubsetMask full_set(int space_points);
  static SubsetMask singleton(int space_points, int x) { return SubsetMask(space_points, {x}); }

  int space_points() const { return space_points_; }
  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  double measure() const { return static_cast<double>(members_.size()) / space_points_; }
  bool contains(int x) const;

  SubsetMask intersect(const SubsetMask& other) const;

 private:
  int space_points_ = 1;
  std::vector<int> members_;  // sorted, unique
};

/// A partition of Z_J into disjoint nonempty blocks covering the space.
class Partition {
 public:
  Partition(int space_points, std::vector<SubsetMask> blocks);

  static Partition trivial(int space_points);
  static Partition singletons(int space_points);
  /// Build from a restricted growth string (block label per point).
  static Partition from_labels(const std::vector<int>& labels);

  int space_points() const { return space_points_; }
  const std::vector<SubsetMask>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }

  /// True if every block of *this is contained in some block of `coarser`.
  bool refines(const Partition& coarser) const;

 private:
  int space_points_ = 1;
  std::vector<SubsetMask> blocks_;
};

enum class Basis { value, coefficient };

/// A J x J complex matrix acting on L^2(Z_J), tagged with the basis its
/// entries refer to. Value basis: (Wf)(k) = sum_j W(k,j) f(j) on samples.
/// Coefficient basis: (Wf)_k = sum_j W_{kj} f_j on discrete harmonics.
struct FiniteOperator {
  Eigen::MatrixXcd entries;
  Basis basis = Basis::value;

  FiniteOperator() = default;
  FiniteOperator(Eigen::MatrixXcd m, Basis b);

  int points() const { return static_cast<int>(entries.rows()); }

  static FiniteOperator identity(int J, Basis b = Basis::value);
};

/// Orthogonal projector onto X: diagonal 0/1 matrix in the value basis.
FiniteOperator projector(const FiniteSpace& space, const SubsetMask& X);

/// Conjugation by the DFT matrix V_{kj} = eta^{kj}, eta = e^{2 pi i / J}.
/// value = V * coefficient * V^{-1}; the two conversions are mutual inverses.
FiniteOperator change_basis(const FiniteOperator& W, Basis target);

/// Copy of W in the value basis (conversion spelled out at the call site).
inline FiniteOperator value_basis(const FiniteOperator& W) {
  return change_basis(W, Basis::value);
}
inline FiniteOperator coefficient_basis(const FiniteOperator& W) {
  return change_basis(W, Basis::coefficient);
}

/// L^2 operator norm = largest singular value. The uniform 1/J scaling of
/// the inner product drops out, so this is the plain spectral norm.
double operator_norm(const FiniteOperator& W);

/// M_chi(W) = sum_j mu(Y_j) * ||W pi_{Y_j}||^2.
double partition_functional(const FiniteOperator& W, const Partition& chi);

/// mu-norm by the closed finite-space formula: sqrt((1/J) sum |W(k,j)|^2)
/// over the value-basis entries.
double mu_norm(const FiniteOperator& W);

/// Iterates every set partition of {0..J-1} exactly once, in restricted
/// growth string order.
class PartitionEnumerator {
 public:
  explicit PartitionEnumerator(int space_points, int guard = default_partition_guard());

  /// Advances to the next partition; returns false when exhausted.
  bool next(Partition& out);

  static int default_partition_guard();  // 10, MUNORM_GUARD_J overrides

 private:
  int points_;
  std::vector<int> labels_;
  std::vector<int> max_label_;
  bool done_ = false;
  bool first_ = true;
  bool advance();
};

struct MuNormSearch {
  double minimum = 0.0;          // min over all set partitions of sqrt(M_chi)
  double singleton_value = 0.0;  // sqrt(M) at the partition into singletons
  long long partitions_visited = 0;
};

/// Brute-force mu-norm: minimum of sqrt(M_chi(W)) over all set partitions.
/// Throws if J exceeds the guard (default 10; see MUNORM_GUARD_J).
MuNormSearch mu_norm_by_partition_search(
    const FiniteOperator& W, int guard = PartitionEnumerator::default_partition_guard());

/// Discrete Fourier transform: f(k) = sum_j f_j eta^{kj} (coefficients to
/// values) and its inverse f_j = (1/J) sum_k f(k) eta^{-kj}.
Eigen::VectorXcd dft(const Eigen::VectorXcd& coefficients);
Eigen::VectorXcd idft(const Eigen::VectorXcd& values);

/// Multiplication operator by the sample vector g: diagonal in value basis.
FiniteOperator multiplication_operator(const Eigen::VectorXcd& values);

/// Cyclic diagonal-type norm on Z_J: sum_k max_j |W_{k+j,j}| over
/// coefficient-basis entries (indices mod J).
double finite_dt_norm(const FiniteOperator& W);

/// Max deviation of W* W from the identity (any basis; unitarity is
/// basis-independent here).
double unitarity_defect(const FiniteOperator& W);

}  // namespace munorm
