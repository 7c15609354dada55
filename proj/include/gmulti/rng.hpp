#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace gmulti {

// splitmix64 finalizer; used to derive well-separated seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic random source: std::mt19937_64 (whose output sequence is fixed
// by the standard) plus our own distribution code, so draws never depend on a
// standard-library implementation detail.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, n); unbiased via rejection. n must be >= 1.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      const std::uint64_t r = gen_();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via the polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  // Unit-rate exponential.
  double exponential() { return -std::log1p(-uniform01()); }

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Hierarchical seed stream. child(tag) derives an independent substream, so
// every replicate / interval / recursion branch owns a reproducible generator
// no matter how the work is scheduled across threads.
struct RngStream {
  std::uint64_t state = 0;

  RngStream child(std::uint64_t tag) const {
    return RngStream{mix64(state ^ mix64(tag + 0x51ed270b7a2ca8dbULL))};
  }
  Rng rng() const { return Rng(state); }
};

}  // namespace gmulti
