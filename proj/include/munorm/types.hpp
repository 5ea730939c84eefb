// Shared aliases and small value types used across the library.
#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>

namespace munorm {

using cplx = std::complex<double>;
using index_t = std::int64_t;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Default absolute comparison tolerance for norm identities.
inline constexpr double kDefaultTol = 1e-9;

/// Closed integer interval [lo, hi] on the lattice Z.
struct IntInterval {
  index_t lo = 0;
  index_t hi = 0;

  IntInterval() = default;
  IntInterval(index_t lo_, index_t hi_) : lo(lo_), hi(hi_) {
    if (hi < lo) throw std::invalid_argument("IntInterval: hi < lo");
  }

  index_t count() const { return hi - lo + 1; }

  /// Interval of given length starting at `start`.
  static IntInterval starting(index_t start, index_t length) {
    if (length < 1) throw std::invalid_argument("IntInterval: length < 1");
    return IntInterval(start, start + length - 1);
  }

  /// Interval of given length roughly centered at the origin.
  static IntInterval centered(index_t length) {
    if (length < 1) throw std::invalid_argument("IntInterval: length < 1");
    index_t lo = -(length / 2);
    return IntInterval(lo, lo + length - 1);
  }
};

/// x mod m in [0, m).
inline index_t mod_floor(index_t x, index_t m) {
  index_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace munorm
