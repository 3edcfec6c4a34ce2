#pragma once

#include <cmath>
#include <cstdint>

namespace levyheat {

// Counter-based stream: the state for cell (i, j) is derived from
// (seed, i, j) alone, so sampling is independent of evaluation order.
namespace rng {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo) {
    state_ = splitmix64(splitmix64(splitmix64(seed) ^ hi) ^ lo);
  }

  std::uint64_t next_u64() {
    state_ = splitmix64(state_);
    return state_;
  }

  // Uniform on (0, 1); never returns exactly 0, safe inside log().
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  // Inversion; fine for the small means used in per-cell sampling.
  long poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
      const double L = std::exp(-mean);
      long k = 0;
      double p = uniform();
      while (p > L) {
        ++k;
        p *= uniform();
      }
      return k;
    }
    // Split recursively so the inversion product stays in range.
    long half = poisson(mean / 2.0);
    return half + poisson(mean - mean / 2.0);
  }

 private:
  std::uint64_t state_;
};

}  // namespace rng
}  // namespace levyheat
