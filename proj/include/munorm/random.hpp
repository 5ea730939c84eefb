// Deterministic random sources. All randomized checks in the library are
// seeded explicitly; the raw engine output is mapped to doubles by hand so
// that identical seeds give identical streams on any standard library.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "munorm/types.hpp"

namespace munorm {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi] (inclusive), rejection-sampled.
  int uniform_int(int lo, int hi);

  /// Standard normal (Box-Muller).
  double normal();

  /// Complex standard normal: E|z|^2 = 1.
  cplx complex_normal() {
    return cplx(normal(), normal()) / std::sqrt(2.0);
  }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// J x J matrix of i.i.d. complex standard normals.
Eigen::MatrixXcd random_complex_matrix(int n, Rng& rng);

/// Random unitary: QR orthonormalization of a complex Gaussian matrix.
Eigen::MatrixXcd random_unitary(int n, Rng& rng);

}  // namespace munorm
