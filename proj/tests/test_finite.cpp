#include <doctest.h>

#include <cmath>
#include <set>

#include "munorm/finite.hpp"
#include "munorm/random.hpp"

using namespace munorm;

namespace {

// Bell numbers by the Bell-triangle recurrence; independent of the
// enumerator under test.
std::vector<long long> bell_numbers(int up_to) {
  std::vector<long long> bell = {1};  // B(0)
  std::vector<long long> row = {1};
  for (int n = 1; n <= up_to; ++n) {
    std::vector<long long> next = {row.back()};
    for (long long v : row) next.push_back(next.back() + v);
    row = std::move(next);
    bell.push_back(row.front());
  }
  return bell;
}

long long count_partitions(int J) {
  PartitionEnumerator en(J);
  Partition p = Partition::trivial(J);
  long long count = 0;
  while (en.next(p)) ++count;
  return count;
}

}  // namespace

TEST_CASE("projector examples") {
  const FiniteSpace space(4);
  CHECK(projector(space, SubsetMask::empty_set(4)).entries.norm() == 0.0);
  CHECK((projector(space, SubsetMask::full_set(4)).entries -
         Eigen::MatrixXcd::Identity(4, 4))
            .norm() == 0.0);
  const FiniteOperator p = projector(space, SubsetMask(4, {0, 1}));
  CHECK(p.entries(0, 0) == cplx(1.0));
  CHECK(p.entries(1, 1) == cplx(1.0));
  CHECK(p.entries(2, 2) == cplx(0.0));
  CHECK(p.entries(3, 3) == cplx(0.0));
  // idempotent and self-adjoint
  CHECK((p.entries * p.entries - p.entries).norm() == 0.0);
  CHECK((p.entries.adjoint() - p.entries).norm() == 0.0);
}

TEST_CASE("basis change") {
  const FiniteOperator id = FiniteOperator::identity(5, Basis::coefficient);
  CHECK((change_basis(id, Basis::value).entries - Eigen::MatrixXcd::Identity(5, 5))
            .norm() < 1e-12);

  // J = 2, coefficient diag(1, -1) maps to the swap matrix in the value basis.
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  const FiniteOperator v = change_basis(FiniteOperator(d, Basis::coefficient),
                                        Basis::value);
  Eigen::MatrixXcd swap(2, 2);
  swap << 0, 1, 1, 0;
  CHECK((v.entries - swap).cwiseAbs().maxCoeff() < 1e-12);

  Rng rng(7);
  const FiniteOperator w(random_complex_matrix(6, rng), Basis::value);
  const FiniteOperator round =
      change_basis(change_basis(w, Basis::coefficient), Basis::value);
  CHECK((round.entries - w.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("operator norm") {
  CHECK(operator_norm(FiniteOperator::identity(4)) == doctest::Approx(1.0));
  const FiniteSpace space(4);
  CHECK(operator_norm(projector(space, SubsetMask(4, {1, 2}))) ==
        doctest::Approx(1.0));
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
  d(0, 0) = 2.0;
  CHECK(operator_norm(FiniteOperator(d, Basis::value)) == doctest::Approx(2.0));
}

TEST_CASE("partition functional") {
  Rng rng(3);
  const FiniteOperator w(random_complex_matrix(4, rng), Basis::value);
  const double n = operator_norm(w);
  CHECK(partition_functional(w, Partition::trivial(4)) == doctest::Approx(n * n));
  CHECK(partition_functional(FiniteOperator::identity(4), Partition::singletons(4)) ==
        doctest::Approx(1.0));

  const FiniteSpace space(2);
  const FiniteOperator p = projector(space, SubsetMask(2, {0}));
  CHECK(partition_functional(p, Partition::singletons(2)) == doctest::Approx(0.5));
}

TEST_CASE("mu-norm formula and brute force agree") {
  CHECK(mu_norm(FiniteOperator::identity(6)) == doctest::Approx(1.0));
  const FiniteSpace space(9);
  CHECK(mu_norm(projector(space, SubsetMask(9, {0, 3, 4}))) ==
        doctest::Approx(std::sqrt(3.0 / 9.0)));

  Rng rng(11);
  for (int J = 2; J <= 6; ++J) {
    const FiniteOperator w(random_complex_matrix(J, rng), Basis::value);
    const MuNormSearch s = mu_norm_by_partition_search(w);
    CHECK(std::abs(s.minimum - mu_norm(w)) < 1e-9);
    CHECK(std::abs(s.singleton_value - s.minimum) < 1e-9);
  }
}

TEST_CASE("partition search guard") {
  CHECK_THROWS_AS(mu_norm_by_partition_search(FiniteOperator::identity(11)),
                  std::length_error);
}

TEST_CASE("partition enumeration matches the Bell triangle") {
  const auto bell = bell_numbers(8);
  CHECK(count_partitions(1) == 1);
  CHECK(count_partitions(3) == 5);
  CHECK(count_partitions(4) == 15);
  for (int J = 1; J <= 8; ++J) CHECK(count_partitions(J) == bell[J]);

  // No duplicates: canonical label strings are pairwise distinct.
  PartitionEnumerator en(6);
  Partition p = Partition::trivial(6);
  std::set<std::string> seen;
  while (en.next(p)) {
    std::string key;
    std::vector<int> owner(6);
    for (int b = 0; b < p.block_count(); ++b)
      for (int x : p.blocks()[b].members()) owner[x] = b;
    for (int x = 0; x < 6; ++x) key += static_cast<char>('a' + owner[x]);
    CHECK(seen.insert(key).second);
  }
}

TEST_CASE("dft examples and roundtrip") {
  Eigen::VectorXcd c(2);
  c << 1, 0;
  CHECK((dft(c) - Eigen::VectorXcd::Ones(2)).norm() < 1e-15);
  c << 0, 1;
  Eigen::VectorXcd expect(2);
  expect << 1, -1;
  CHECK((dft(c) - expect).norm() < 1e-15);

  Rng rng(5);
  Eigen::VectorXcd f(7);
  for (int i = 0; i < 7; ++i) f(i) = rng.complex_normal();
  CHECK((idft(dft(f)) - f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("multiplication operator on the finite space") {
  CHECK(mu_norm(multiplication_operator(Eigen::VectorXcd::Ones(5))) ==
        doctest::Approx(1.0));

  Eigen::VectorXcd g(2);
  g << 2, 0;
  const double mu = mu_norm(multiplication_operator(g));
  CHECK(mu * mu == doctest::Approx(2.0));  // equals ||g||^2 = (1/J) sum |g(k)|^2

  const int J = 6;
  Eigen::VectorXcd phases(J);
  for (int x = 0; x < J; ++x) phases(x) = std::polar(1.0, kTwoPi * x / J);
  CHECK(mu_norm(multiplication_operator(phases)) == doctest::Approx(1.0));
}

TEST_CASE("seminorm properties") {
  Rng rng(17);
  const int J = 6;
  for (int trial = 0; trial < 10; ++trial) {
    const FiniteOperator w1(random_complex_matrix(J, rng), Basis::value);
    const FiniteOperator w2(random_complex_matrix(J, rng), Basis::value);
    const cplx lambda = rng.complex_normal();
    CHECK(mu_norm(FiniteOperator(w1.entries + w2.entries, Basis::value)) <=
          mu_norm(w1) + mu_norm(w2) + 1e-10);
    CHECK(mu_norm(FiniteOperator(lambda * w1.entries, Basis::value)) ==
          doctest::Approx(std::abs(lambda) * mu_norm(w1)));
    CHECK(mu_norm(w1) <= operator_norm(w1) + 1e-10);
    const FiniteOperator u(random_unitary(J, rng), Basis::value);
    CHECK(mu_norm(FiniteOperator(u.entries * w1.entries, Basis::value)) ==
          doctest::Approx(mu_norm(w1)));
    CHECK(mu_norm(FiniteOperator(w1.entries * w2.entries, Basis::value)) <=
          operator_norm(w1) * mu_norm(w2) + 1e-10);
    CHECK(std::abs(mu_norm(w1) - mu_norm(w2)) <=
          operator_norm(FiniteOperator(w1.entries - w2.entries, Basis::value)) +
              1e-10);
  }
}

TEST_CASE("subpartition monotonicity, all pairs J <= 5") {
  Rng rng(23);
  for (int J = 3; J <= 5; ++J) {
    const FiniteOperator w(random_complex_matrix(J, rng), Basis::value);
    std::vector<Partition> all;
    PartitionEnumerator en(J);
    Partition p = Partition::trivial(J);
    while (en.next(p)) all.push_back(p);
    for (const Partition& fine : all)
      for (const Partition& coarse : all)
        if (fine.refines(coarse))
          CHECK(partition_functional(w, fine) <=
                partition_functional(w, coarse) + 1e-12);
  }
}

TEST_CASE("partition additivity") {
  Rng rng(29);
  const int J = 6;
  const FiniteOperator w(random_complex_matrix(J, rng), Basis::value);
  PartitionEnumerator en(J, 6);
  Partition chi = Partition::trivial(J);
  const FiniteSpace space(J);
  int tested = 0;
  while (en.next(chi) && tested < 40) {
    double right_sum = 0.0, left_sum = 0.0;
    for (const auto& block : chi.blocks()) {
      const Eigen::MatrixXcd pi = projector(space, block).entries;
      right_sum += std::pow(mu_norm(FiniteOperator(w.entries * pi, Basis::value)), 2);
      left_sum += std::pow(mu_norm(FiniteOperator(pi * w.entries, Basis::value)), 2);
    }
    const double total = std::pow(mu_norm(w), 2);
    CHECK(std::abs(total - right_sum) < 1e-12);
    CHECK(total <= left_sum + 1e-12);
    ++tested;
  }
}

TEST_CASE("mu-norm is definite on finite spaces") {
  for (int J = 2; J <= 6; ++J) {
    CHECK(mu_norm(FiniteOperator(Eigen::MatrixXcd::Zero(J, J), Basis::value)) == 0.0);
    Rng rng(31 + J);
    const FiniteOperator w(random_complex_matrix(J, rng), Basis::value);
    // ||W||_mu = 0 would force every entry to vanish.
    CHECK(mu_norm(w) * std::sqrt(static_cast<double>(J)) >=
          w.entries.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("partition guard honors the environment override") {
  setenv("MUNORM_GUARD_J", "4", 1);
  CHECK(PartitionEnumerator::default_partition_guard() == 4);
  CHECK_THROWS_AS(mu_norm_by_partition_search(FiniteOperator::identity(5)),
                  std::length_error);
  unsetenv("MUNORM_GUARD_J");
  CHECK(PartitionEnumerator::default_partition_guard() == 10);
}

TEST_CASE("finite DT norm basics") {
  CHECK(finite_dt_norm(FiniteOperator::identity(5, Basis::coefficient)) ==
        doctest::Approx(1.0));
  CHECK(unitarity_defect(FiniteOperator::identity(5)) < 1e-15);
}
