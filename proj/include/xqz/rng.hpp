#ifndef XQZ_RNG_HPP
#define XQZ_RNG_HPP

#include <cstdint>

namespace xqz {

// xorshift64* (shifts 12/25/27, multiplier 0x2545F4914F6CDD1D).
// The sequence is part of the XQZ stream format: network matrices are
// regenerated from the header seed, so these constants must not change.
// A zero seed is remapped to a fixed nonzero state.
class Xorshift64Star {
 public:
  explicit Xorshift64Star(std::uint64_t seed)
      : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ull) {}

  std::uint64_t next_u64() {
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545F4914F6CDD1Dull;
  }

  // One fair bit per call: bit 63 of the scrambled output.
  bool next_bit() { return next_u64() >> 63; }

  // Uniform in [0, 1) from the top 53 bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % bound;
    std::uint64_t r;
    do {
      r = next_u64();
    } while (r >= limit);
    return r % bound;
  }

 private:
  std::uint64_t state_;
};

// splitmix64 finalizer, used to derive independent stream seeds
// (per-trial, per-sweep-point) from one user seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace xqz

#endif  // XQZ_RNG_HPP
