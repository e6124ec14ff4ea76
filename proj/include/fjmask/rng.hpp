#ifndef FJMASK_RNG_HPP
#define FJMASK_RNG_HPP

#include <cmath>
#include <cstdint>

namespace fjmask {

// SplitMix64 (Steele, Lea, Flood). Used both as a stream generator and as a
// key-mixing function so that every random draw in the project is a pure
// function of explicit 64-bit keys. This keeps parallel and sequential
// executions bit-identical.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1): 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform01_open_below() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

  // Standard normal via Box-Muller; the spare half of each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open_below();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Key derivation: collapse several 64-bit keys into one stream seed.
inline std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b) {
  SplitMix64 m(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2)));
  return m.next();
}

inline std::uint64_t mix_keys(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) {
  return mix_keys(mix_keys(a, b), c);
}

}  // namespace fjmask

#endif
