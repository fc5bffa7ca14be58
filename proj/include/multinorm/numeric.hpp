#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <vector>

namespace multinorm {

// All group-theoretic arithmetic is exact.  Matrix entries are arbitrary
// precision; intermediate Smith reduction values can exceed any fixed width.
using Int = boost::multiprecision::cpp_int;

inline Int gcd_int(const Int& a, const Int& b) { return boost::multiprecision::gcd(a, b); }
inline Int lcm_int(const Int& a, const Int& b) { return boost::multiprecision::lcm(a, b); }
inline Int abs_int(const Int& a) { return boost::multiprecision::abs(a); }

/// Canonical representative of x modulo d, in [0, d).  d > 0.
inline Int mod_pos(const Int& x, const Int& d) {
  Int r = x % d;
  if (r < 0) r += d;
  return r;
}

inline std::string to_string(const Int& x) { return x.str(); }

/// SplitMix64: a small deterministic generator used for seeded sweeps.
/// Output is identical on every platform, which std:: distributions do not
/// guarantee.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound); bound > 0.  Rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t state_;
};

/// Mixes values into a single seed, for per-instance deterministic streams.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  SplitMix64 rng(a ^ (0x517cc1b727220a95ULL * (b + 1)));
  return rng.next();
}

}  // namespace multinorm
