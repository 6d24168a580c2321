#pragma once

// Counter-based generator: the n-th output of a stream is a pure function of
// (key, n), so streams can be split per chunk and replayed exactly.

#include <cstdint>

namespace dgmd {

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

/// SplitMix64 finalizer.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  constexpr explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0)
      : key_(key), counter_(counter) {}

  /// Independent stream `index` derived from a master seed.
  static constexpr CounterRng stream(std::uint64_t seed, std::uint64_t index) {
    return CounterRng(mix64(mix64(seed) ^ mix64(index + kGoldenGamma)));
  }

  constexpr std::uint64_t next() { return mix64(key_ + (++counter_) * kGoldenGamma); }

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  constexpr double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace dgmd
