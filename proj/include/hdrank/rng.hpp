#pragma once

#include <cstdint>
#include <string_view>

namespace hdrank {

// Counter-mode deterministic randomness.
//
// Every random value in the library is a pure function of
// (master seed, stream label, counter).  Streams are independent of the
// order in which they are drawn from, and the word function uses only
// 64-bit integer arithmetic, so outputs are bit-identical across
// platforms, runs and thread counts.

inline constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Key of the stream named `label` under `master_seed`.
constexpr std::uint64_t stream_key(std::uint64_t master_seed, std::string_view label) noexcept {
  return mix64((master_seed + kGoldenGamma) ^ mix64(fnv1a64(label) + kGoldenGamma));
}

// word(key, c) is the c-th 64-bit block of the stream.
constexpr std::uint64_t counter_word(std::uint64_t key, std::uint64_t counter) noexcept {
  return mix64(key + (counter + 1) * kGoldenGamma);
}

// Sequential view over one stream.
class DetRng {
 public:
  explicit DetRng(std::uint64_t key) noexcept : key_(key) {}
  DetRng(std::uint64_t master_seed, std::string_view label) noexcept
      : key_(stream_key(master_seed, label)) {}

  std::uint64_t next_u64() noexcept { return counter_word(key_, counter_++); }

  // Uniform in [0, 1), 53 mantissa bits.
  double next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Approximate standard normal (Irwin-Hall, 12 uniforms).  Exact IEEE
  // arithmetic only, so values reproduce across libm implementations.
  double next_normal() noexcept {
    double s = 0.0;
    for (int i = 0; i < 12; ++i) s += next_unit();
    return s - 6.0;
  }

  // Uniform in [0, bound).  Modulo construction; bias is negligible for
  // the bounds used here (< 2^20).
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    return next_u64() % bound;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace hdrank
