#pragma once

#include <cstdint>

namespace bellsim {

/// SplitMix64 finalizer: a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

/// Counter-based random stream: draw i of a stream with key k is
/// mix64(k + (i+1)*gamma), so any draw is addressable without advancing
/// state. Substreams fold an id into the key, which makes nested
/// (seed, pair, chunk) addressing reproducible and independent of
/// evaluation order and thread count.
class RngStream {
 public:
  static RngStream from_seed(std::uint64_t seed) { return RngStream{mix64(seed + kGamma)}; }

  RngStream substream(std::uint64_t id) const {
    const std::uint64_t folded = mix64(id + kGamma) + 0x9E3779B97F4A7C15ull + (key_ << 6) + (key_ >> 2);
    return RngStream{mix64(key_ ^ folded)};
  }

  /// Pure counter access; does not advance the stream.
  std::uint64_t at(std::uint64_t i) const { return mix64(key_ + (i + 1) * kGamma); }
  double unit_at(std::uint64_t i) const { return to_unit(at(i)); }

  std::uint64_t next_u64() { return at(counter_++); }

  /// Uniform in [0, 1), 53 random bits.
  double next_unit() { return to_unit(next_u64()); }
  /// Uniform in (0, 1]; safe as a log() argument.
  double next_unit_open() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }
  /// Uniform in [-1, 1).
  double next_symmetric() { return 2.0 * next_unit() - 1.0; }

  static double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

 private:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace bellsim
