#ifndef FRACTEN_RNG_HPP
#define FRACTEN_RNG_HPP

#include <cstdint>

namespace fracten {

/// SplitMix64 generator (Steele, Lea & Flood 2014), using the reference
/// constants. Chosen because its output is fully specified by integer
/// arithmetic, so shuffles and synthetic test series reproduce bit-for-bit
/// across platforms and languages.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1]; safe as a log() argument.
  double uniform01_open_low() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n) via 128-bit multiplicative reduction
  /// (Lemire 2019, without the rejection step). Deterministic and unbiased
  /// to within 2^-64, which is all a reproducible shuffle needs.
  std::uint64_t bounded(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

/// Seed for the i-th independent realization derived from a base seed.
/// Realizations can then run in any order or in parallel.
inline std::uint64_t realization_seed(std::uint64_t base_seed, int index) {
  return SplitMix64::mix(base_seed +
                         static_cast<std::uint64_t>(index + 1) * SplitMix64::kGamma);
}

}  // namespace fracten

#endif  // FRACTEN_RNG_HPP
