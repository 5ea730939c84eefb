#include "munorm/finite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace munorm {

namespace {

Eigen::MatrixXcd dft_matrix(int J) {
  Eigen::MatrixXcd v(J, J);
  for (int k = 0; k < J; ++k)
    for (int j = 0; j < J; ++j)
      v(k, j) = std::polar(1.0, kTwoPi * static_cast<double>(k) * j / J);
  return v;
}

}  // namespace

SubsetMask::SubsetMask(int space_points, std::vector<int> members)
    : space_points_(space_points), members_(std::move(members)) {
  if (space_points_ < 1) throw std::invalid_argument("SubsetMask: empty space");
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  for (int x : members_)
    if (x < 0 || x >= space_points_)
      throw std::invalid_argument("SubsetMask: member out of range");
}

SubsetMask SubsetMask::full_set(int space_points) {
  std::vector<int> all(space_points);
  for (int i = 0; i < space_points; ++i) all[i] = i;
  return SubsetMask(space_points, std::move(all));
}

bool SubsetMask::contains(int x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

SubsetMask SubsetMask::intersect(const SubsetMask& other) const {
  if (other.space_points_ != space_points_)
    throw std::invalid_argument("SubsetMask: space mismatch");
  std::vector<int> out;
  std::set_intersection(members_.begin(), members_.end(), other.members_.begin(),
                        other.members_.end(), std::back_inserter(out));
  return SubsetMask(space_points_, std::move(out));
}

Partition::Partition(int space_points, std::vector<SubsetMask> blocks)
    : space_points_(space_points), blocks_(std::move(blocks)) {
  std::vector<char> seen(space_points_, 0);
  int covered = 0;
  for (const auto& b : blocks_) {
    if (b.space_points() != space_points_)
      throw std::invalid_argument("Partition: block space mismatch");
    if (b.size() == 0) throw std::invalid_argument("Partition: empty block");
    for (int x : b.members()) {
      if (seen[x]) throw std::invalid_argument("Partition: overlapping blocks");
      seen[x] = 1;
      ++covered;
    }
  }
  if (covered != space_points_)
    throw std::invalid_argument("Partition: blocks do not cover the space");
}

Partition Partition::trivial(int space_points) {
  return Partition(space_points, {SubsetMask::full_set(space_points)});
}

Partition Partition::singletons(int space_points) {
  std::vector<SubsetMask> blocks;
  blocks.reserve(space_points);
  for (int x = 0; x < space_points; ++x)
    blocks.push_back(SubsetMask::singleton(space_points, x));
  return Partition(space_points, std::move(blocks));
}

Partition Partition::from_labels(const std::vector<int>& labels) {
  const int J = static_cast<int>(labels.size());
  int nblocks = 0;
  for (int l : labels) nblocks = std::max(nblocks, l + 1);
  std::vector<std::vector<int>> buckets(nblocks);
  for (int x = 0; x < J; ++x) {
    if (labels[x] < 0) throw std::invalid_argument("from_labels: negative label");
    buckets[labels[x]].push_back(x);
  }
  std::vector<SubsetMask> blocks;
  for (auto& b : buckets)
    if (!b.empty()) blocks.emplace_back(J, std::move(b));
  return Partition(J, std::move(blocks));
}

bool Partition::refines(const Partition& coarser) const {
  if (coarser.space_points_ != space_points_) return false;
  std::vector<int> owner(space_points_, -1);
  for (int i = 0; i < coarser.block_count(); ++i)
    for (int x : coarser.blocks_[i].members()) owner[x] = i;
  for (const auto& b : blocks_) {
    const int o = owner[b.members().front()];
    for (int x : b.members())
      if (owner[x] != o) return false;
  }
  return true;
}

FiniteOperator::FiniteOperator(Eigen::MatrixXcd m, Basis b)
    : entries(std::move(m)), basis(b) {
  if (entries.rows() != entries.cols())
    throw std::invalid_argument("FiniteOperator: matrix must be square");
  if (!entries.allFinite())
    throw std::invalid_argument("FiniteOperator: entries must be finite");
}

FiniteOperator FiniteOperator::identity(int J, Basis b) {
  return FiniteOperator(Eigen::MatrixXcd::Identity(J, J), b);
}

FiniteOperator projector(const FiniteSpace& space, const SubsetMask& X) {
  if (X.space_points() != space.points)
    throw std::invalid_argument("projector: subset/space mismatch");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(space.points, space.points);
  for (int x : X.members()) m(x, x) = 1.0;
  return FiniteOperator(std::move(m), Basis::value);
}

FiniteOperator change_basis(const FiniteOperator& W, Basis target) {
  if (W.basis == target) return W;
  const int J = W.points();
  const Eigen::MatrixXcd v = dft_matrix(J);
  const Eigen::MatrixXcd v_inv = v.adjoint() / static_cast<double>(J);
  if (target == Basis::value)
    return FiniteOperator(v * W.entries * v_inv, Basis::value);
  return FiniteOperator(v_inv * W.entries * v, Basis::coefficient);
}

double operator_norm(const FiniteOperator& W) {
  const FiniteOperator val = value_basis(W);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(val.entries);
  return svd.singularValues()(0);
}

double partition_functional(const FiniteOperator& W, const Partition& chi) {
  const FiniteOperator val = value_basis(W);
  const int J = val.points();
  if (chi.space_points() != J)
    throw std::invalid_argument("partition_functional: partition/operator mismatch");
  double total = 0.0;
  for (const auto& block : chi.blocks()) {
    // W pi_Y keeps only the columns indexed by Y.
    Eigen::MatrixXcd cols(J, block.size());
    int c = 0;
    for (int x : block.members()) cols.col(c++) = val.entries.col(x);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cols);
    const double norm = svd.singularValues()(0);
    total += block.measure() * norm * norm;
  }
  return total;
}

double mu_norm(const FiniteOperator& W) {
  const FiniteOperator val = value_basis(W);
  return std::sqrt(val.entries.squaredNorm() / val.points());
}

int PartitionEnumerator::default_partition_guard() {
  if (const char* env = std::getenv("MUNORM_GUARD_J")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  return 10;
}

PartitionEnumerator::PartitionEnumerator(int space_points, int guard)
    : points_(space_points) {
  if (space_points < 1)
    throw std::invalid_argument("PartitionEnumerator: J must be >= 1");
  if (space_points > guard)
    throw std::length_error("PartitionEnumerator: J exceeds partition guard");
  labels_.assign(points_, 0);
  max_label_.assign(points_, 0);
}

bool PartitionEnumerator::advance() {
  // Restricted growth strings: labels_[0] = 0 and
  // labels_[i] <= 1 + max(labels_[0..i-1]).
  for (int i = points_ - 1; i > 0; --i) {
    if (labels_[i] <= max_label_[i - 1]) {
      ++labels_[i];
      max_label_[i] = std::max(max_label_[i - 1], labels_[i]);
      for (int j = i + 1; j < points_; ++j) {
        labels_[j] = 0;
        max_label_[j] = max_label_[i];
      }
      return true;
    }
  }
  return false;
}

bool PartitionEnumerator::next(Partition& out) {
  if (done_) return false;
  if (first_) {
    first_ = false;
  } else if (!advance()) {
    done_ = true;
    return false;
  }
  out = Partition::from_labels(labels_);
  return true;
}

MuNormSearch mu_norm_by_partition_search(const FiniteOperator& W, int guard) {
  const FiniteOperator val = value_basis(W);
  const int J = val.points();
  PartitionEnumerator en(J, guard);  // throws when J exceeds the guard
  MuNormSearch result;
  result.minimum = std::numeric_limits<double>::infinity();
  Partition chi = Partition::trivial(J);
  while (en.next(chi)) {
    const double m = partition_functional(val, chi);
    ++result.partitions_visited;
    result.minimum = std::min(result.minimum, std::sqrt(m));
    if (chi.block_count() == J) result.singleton_value = std::sqrt(m);
  }
  return result;
}

Eigen::VectorXcd dft(const Eigen::VectorXcd& coefficients) {
  const int J = static_cast<int>(coefficients.size());
  return dft_matrix(J) * coefficients;
}

Eigen::VectorXcd idft(const Eigen::VectorXcd& values) {
  const int J = static_cast<int>(values.size());
  return dft_matrix(J).adjoint() * values / static_cast<double>(J);
}

FiniteOperator multiplication_operator(const Eigen::VectorXcd& values) {
  const int J = static_cast<int>(values.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(J, J);
  for (int k = 0; k < J; ++k) m(k, k) = values(k);
  return FiniteOperator(std::move(m), Basis::value);
}

double finite_dt_norm(const FiniteOperator& W) {
  const FiniteOperator coeff = coefficient_basis(W);
  const int J = coeff.points();
  double total = 0.0;
  for (int k = 0; k < J; ++k) {
    double c = 0.0;
    for (int j = 0; j < J; ++j)
      c = std::max(c, std::abs(coeff.entries((k + j) % J, j)));
    total += c;
  }
  return total;
}

double unitarity_defect(const FiniteOperator& W) {
  const int J = W.points();
  const Eigen::MatrixXcd d =
      W.entries.adjoint() * W.entries - Eigen::MatrixXcd::Identity(J, J);
  return d.cwiseAbs().maxCoeff();
}

}  // namespace munorm
