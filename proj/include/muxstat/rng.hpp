#pragma once

#include <cstdint>

namespace muxstat {

/// Counter-based uniform generator (SplitMix64 output function over an
/// incrementing counter). Streams are pure functions of (key, counter),
/// so a stream can be split into independent substreams that reproduce
/// identically under any evaluation order.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : key_(mix(seed ^ kKeyTweak)) {}

  std::uint64_t next_u64() { return mix(key_ + (++counter_) * kGamma); }

  /// Uniform draw strictly inside (0, 1); 53-bit resolution.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Independent stream derived from this one's key and `index`.
  /// Does not consume state from the parent.
  SplitRng substream(std::uint64_t index) const {
    SplitRng child(0);
    child.key_ = mix(key_ ^ mix(kSplitTweak + index * kGamma));
    child.counter_ = 0;
    return child;
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kKeyTweak = 0x6a09e667f3bcc909ULL;
  static constexpr std::uint64_t kSplitTweak = 0xbb67ae8584caa73bULL;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace muxstat
