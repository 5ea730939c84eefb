#include <doctest.h>

#include <cmath>

#include "munorm/koopman.hpp"

using namespace munorm;

namespace {

// Brute-force KS stage: enumerate every word and sum cell entropies through
// preimage_cell. Independent of the itinerary bucketing in the library.
double ks_stage_by_words(const Permutation& F, const Partition& chi, int N) {
  const int K1 = chi.block_count();
  long long total = 1;
  for (int i = 0; i <= N; ++i) total *= K1;
  double h = 0.0;
  for (long long code = 0; code < total; ++code) {
    PartitionWord word(N + 1);
    long long c = code;
    for (int i = 0; i <= N; ++i) {
      word[i] = static_cast<int>(c % K1);
      c /= K1;
    }
    const double mass = preimage_cell(F, chi, word).measure();
    if (mass > 0.0) h -= mass * std::log(mass);
  }
  return h;
}

}  // namespace

TEST_CASE("koopman operator basics") {
  CHECK((koopman(Permutation::identity(3)).entries -
         Eigen::MatrixXcd::Identity(3, 3))
            .norm() == 0.0);

  const FiniteOperator swap = koopman(Permutation({1, 0}));
  CHECK(swap.entries(0, 1) == cplx(1.0));
  CHECK(swap.entries(1, 0) == cplx(1.0));
  CHECK(swap.entries(0, 0) == cplx(0.0));

  Rng rng(2);
  const FiniteOperator u = koopman(Permutation::random(8, rng));
  CHECK(unitarity_defect(u) < 1e-12);
}

TEST_CASE("koopman projector intertwining") {
  CHECK(koopman_projector_identity(Permutation::identity(4), SubsetMask(4, {1, 3})));
  // J = 4 shift, X = {0}: F^{-1}(X) = {3}.
  const Permutation shift = Permutation::shift(4);
  CHECK(shift.preimage(SubsetMask(4, {0})).members() == std::vector<int>{3});
  CHECK(koopman_projector_identity(shift, SubsetMask(4, {0})));

  Rng rng(9);
  const Permutation f = Permutation::random(6, rng);
  for (int x = 0; x < 6; ++x)
    CHECK(koopman_projector_identity(f, SubsetMask::singleton(6, x)));
}

TEST_CASE("preimage cells") {
  const Partition halves(4, {SubsetMask(4, {0, 1}), SubsetMask(4, {2, 3})});
  const Permutation shift = Permutation::shift(4);

  CHECK(preimage_cell(shift, halves, {1}).members() == std::vector<int>{2, 3});
  CHECK(preimage_cell(Permutation::identity(4), halves, {0, 0, 0}).members() ==
        std::vector<int>{0, 1});
  CHECK(preimage_cell(shift, halves, {0, 0}).members() == std::vector<int>{0});
}

TEST_CASE("KS entropy stages") {
  const Permutation shift = Permutation::shift(4);
  const Partition halves(4, {SubsetMask(4, {0, 1}), SubsetMask(4, {2, 3})});

  CHECK(ks_entropy_stage(shift, Partition::trivial(4), 3) == 0.0);
  CHECK(ks_entropy_stage(shift, halves, 1) == doctest::Approx(std::log(4.0)));

  // Identity map: every stage is the plain partition entropy.
  const Partition chi(4, {SubsetMask(4, {0}), SubsetMask(4, {1, 2, 3})});
  const double h0 = -(0.25 * std::log(0.25) + 0.75 * std::log(0.75));
  for (int N = 0; N <= 4; ++N)
    CHECK(ks_entropy_stage(Permutation::identity(4), chi, N) ==
          doctest::Approx(h0));
}

TEST_CASE("KS stage equals the word-enumeration oracle") {
  Rng rng(13);
  for (int trial = 0; trial < 8; ++trial) {
    const int J = 4 + trial % 3;
    const Permutation f = Permutation::random(J, rng);
    PartitionEnumerator en(J, J);
    Partition chi = Partition::trivial(J);
    int taken = 0;
    while (en.next(chi) && taken < 6) {
      for (int N = 0; N <= 3; ++N)
        CHECK(ks_entropy_stage(f, chi, N) ==
              doctest::Approx(ks_stage_by_words(f, chi, N)).epsilon(1e-12));
      ++taken;
    }
  }
}

TEST_CASE("projector words") {
  const Partition halves(4, {SubsetMask(4, {0, 1}), SubsetMask(4, {2, 3})});
  const FiniteOperator id = FiniteOperator::identity(4);
  const FiniteSpace space(4);

  // Single letter: the block projector itself.
  CHECK((projector_word(id, halves, {1}).entries -
         projector(space, halves.blocks()[1]).entries)
            .norm() == 0.0);

  // U = identity: projector of the intersection.
  const Partition chi(4, {SubsetMask(4, {0, 1, 2}), SubsetMask(4, {3})});
  const FiniteOperator w = projector_word(id, chi, {0, 0});
  CHECK((w.entries - projector(space, chi.blocks()[0]).entries).norm() == 0.0);
}

TEST_CASE("koopman words measure reversed cells") {
  // For U = U_F the word mu-norm squared equals the measure of the refined
  // cell of the REVERSED word; the unreversed pairing genuinely fails.
  const Permutation cycle = Permutation::shift(3);
  const Partition single = Partition::singletons(3);
  const FiniteOperator u = koopman(cycle);

  const PartitionWord word = {0, 1};
  const double mu_sq =
      projector_word(u, single, word).entries.squaredNorm() / 3.0;
  const PartitionWord reversed = {1, 0};
  CHECK(mu_sq ==
        doctest::Approx(preimage_cell(cycle, single, reversed).measure()));
  CHECK(preimage_cell(cycle, single, word).measure() ==
        doctest::Approx(1.0 / 3.0));
  CHECK(mu_sq == doctest::Approx(0.0));  // differs from the unreversed cell

  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const int J = 6;
    const Permutation f = Permutation::random(J, rng);
    const FiniteOperator uf = koopman(f);
    const Partition chi(6, {SubsetMask(6, {0, 1}), SubsetMask(6, {2, 3}),
                            SubsetMask(6, {4, 5})});
    walk_projector_words(uf, chi, 4,
                         [&](const PartitionWord& w, const Eigen::MatrixXcd& m) {
                           PartitionWord rev(w.rbegin(), w.rend());
                           const double mass = preimage_cell(f, chi, rev).measure();
                           CHECK(std::abs(m.squaredNorm() / J - mass) < 1e-12);
                         });
  }
}

TEST_CASE("refined cells of a fixed word length partition the space") {
  Rng rng(19);
  for (int trial = 0; trial < 4; ++trial) {
    const int J = 5 + trial;
    const Permutation f = Permutation::random(J, rng);
    const Partition chi = Partition::from_labels([&] {
      std::vector<int> labels(J);
      for (int x = 0; x < J; ++x) labels[x] = x % 3;
      return labels;
    }());
    for (int N = 0; N <= 3; ++N) {
      const int K1 = chi.block_count();
      long long words = 1;
      for (int i = 0; i <= N; ++i) words *= K1;
      double total = 0.0;
      for (long long code = 0; code < words; ++code) {
        PartitionWord word(N + 1);
        long long c = code;
        for (int i = 0; i <= N; ++i) {
          word[i] = static_cast<int>(c % K1);
          c /= K1;
        }
        total += preimage_cell(f, chi, word).measure();
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("quantum stages of Koopman operators equal KS stages") {
  const Permutation shift = Permutation::shift(4);
  const Partition halves(4, {SubsetMask(4, {0, 1}), SubsetMask(4, {2, 3})});
  const FiniteOperator u = koopman(shift);

  CHECK(quantum_entropy_stage(u, Partition::trivial(4), 2) == 0.0);
  CHECK(quantum_entropy_stage(u, halves, 1) == doctest::Approx(std::log(4.0)));

  Rng rng(37);
  for (int trial = 0; trial < 6; ++trial) {
    const int J = 5 + trial % 2;
    const Permutation f = Permutation::random(J, rng);
    const FiniteOperator uf = koopman(f);
    const Partition chi =
        Partition::from_labels([&] {
          std::vector<int> labels(J);
          for (int x = 0; x < J; ++x) labels[x] = rng.uniform_int(0, 1);
          labels[0] = 0;
          labels[J - 1] = 1;
          return labels;
        }());
    for (int N = 0; N <= 3; ++N)
      CHECK(std::abs(quantum_entropy_stage(uf, chi, N) -
                     ks_entropy_stage(f, chi, N)) < 1e-10);
  }
}

TEST_CASE("quantum stage of a generic unitary matches a direct word sum") {
  Rng rng(41);
  const Eigen::MatrixXcd u = random_unitary(2, rng);
  const FiniteOperator U(u, Basis::value);
  const Partition single = Partition::singletons(2);
  const FiniteSpace space(2);

  double expected = 0.0;
  for (int j0 = 0; j0 < 2; ++j0)
    for (int j1 = 0; j1 < 2; ++j1) {
      const Eigen::MatrixXcd frak = projector(space, single.blocks()[j1]).entries *
                                    u *
                                    projector(space, single.blocks()[j0]).entries;
      const double p = frak.squaredNorm() / 2.0;
      if (p > 0.0) expected -= p * std::log(p);
    }
  CHECK(quantum_entropy_stage(U, single, 1) == doctest::Approx(expected));
}

TEST_CASE("entropy rate sequences") {
  const Permutation shift = Permutation::shift(4);
  const Partition halves(4, {SubsetMask(4, {0, 1}), SubsetMask(4, {2, 3})});
  const FiniteOperator u = koopman(shift);

  const std::vector<double> trivial_rates =
      entropy_rate_sequence(u, Partition::trivial(4), 5);
  for (double r : trivial_rates) CHECK(r == 0.0);

  const std::vector<double> rates = entropy_rate_sequence(u, halves, 6);
  for (int n = 1; n <= 6; ++n)
    CHECK(rates[n - 1] == doctest::Approx(ks_entropy_stage(shift, halves, n - 1) / n));
  // Stages of a permutation are bounded, so the rate sequence decays.
  CHECK(rates[5] <= std::log(4.0) / 6 + 1e-12);

  CHECK_THROWS_AS(
      entropy_rate_sequence(koopman(Permutation::identity(12)),
                            Partition::singletons(12), 8),
      std::length_error);
}

TEST_CASE("multiplication chains through the Koopman operator") {
  const int J = 4;
  const Permutation shift = Permutation::shift(J);

  {  // K = 0: plain multiplication operator.
    Rng rng(43);
    Eigen::VectorXcd g(J);
    for (int i = 0; i < J; ++i) g(i) = rng.complex_normal();
    const ChainMuNorm r = chain_mu_norm(shift, {g});
    double norm_sq = 0.0;
    for (int i = 0; i < J; ++i) norm_sq += std::norm(g(i)) / J;
    CHECK(r.mu_norm_sq == doctest::Approx(norm_sq));
    CHECK(r.match == ChainMatch::both);
  }

  {  // All ones.
    const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(J);
    const ChainMuNorm r = chain_mu_norm(shift, {one, one, one});
    CHECK(r.mu_norm_sq == doctest::Approx(1.0));
  }

  {  // Indicators: g1 = 1_{0}, g0 = 1_{1} -> 1/4, reversed orientation.
    Eigen::VectorXcd g0 = Eigen::VectorXcd::Zero(J), g1 = Eigen::VectorXcd::Zero(J);
    g0(1) = 1.0;
    g1(0) = 1.0;
    const ChainMuNorm r = chain_mu_norm(shift, {g0, g1});
    CHECK(r.mu_norm_sq == doctest::Approx(0.25));
    CHECK(r.reversed_integral == doctest::Approx(0.25));
    CHECK(r.forward_integral == doctest::Approx(0.0));
    CHECK(r.match == ChainMatch::reversed);
  }

  {  // Random data always matches the reversed assignment.
    Rng rng(47);
    for (int trial = 0; trial < 5; ++trial) {
      const Permutation f = Permutation::random(5, rng);
      std::vector<Eigen::VectorXcd> gs(3, Eigen::VectorXcd(5));
      for (auto& g : gs)
        for (int i = 0; i < 5; ++i) g(i) = rng.complex_normal();
      const ChainMuNorm r = chain_mu_norm(f, gs);
      CHECK((r.match == ChainMatch::reversed || r.match == ChainMatch::both));
    }
  }
}

TEST_CASE("pair measure of a Koopman operator") {
  const PairMassTable id_table = koopman_pair_measure(Permutation::identity(3));
  for (int i = 0; i < 3; ++i) CHECK(id_table.mass(i, i) == doctest::Approx(1.0 / 3));

  const PairMassTable t = koopman_pair_measure(Permutation::shift(4));
  for (int a = 0; a < 4; ++a) CHECK(t.mass((a + 1) % 4, a) == doctest::Approx(0.25));
  CHECK(t.row_marginal.sum() == doctest::Approx(1.0));
  CHECK(t.col_marginal.sum() == doctest::Approx(1.0));
  for (int i = 0; i < 4; ++i) {
    CHECK(t.row_marginal(i) == doctest::Approx(0.25));
    CHECK(t.col_marginal(i) == doctest::Approx(0.25));
  }
}

TEST_CASE("right multiplication by a Koopman operator preserves the mu-norm") {
  Rng rng(53);
  const int J = 6;
  for (int trial = 0; trial < 10; ++trial) {
    const FiniteOperator w(random_complex_matrix(J, rng), Basis::value);
    const FiniteOperator u = koopman(Permutation::random(J, rng));
    CHECK(mu_norm(FiniteOperator(w.entries * u.entries, Basis::value)) ==
          doctest::Approx(mu_norm(w)).epsilon(1e-10));
  }
}
