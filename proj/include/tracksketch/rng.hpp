#pragma once

#include <cstdint>
#include <string_view>

namespace tracksketch {

/// SplitMix64 finaliser; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// FNV-1a, used to turn sub-augmentation tags into stream keys.
constexpr std::uint64_t hash_tag(std::string_view tag) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept {
  return mix64(mix64(parent) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag) noexcept {
  return derive_seed(parent, hash_tag(tag));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index,
                                    std::string_view tag) noexcept {
  return derive_seed(derive_seed(parent, index), tag);
}

/// Counter-based stream: the n-th draw is mix64(key + n * gamma), so a stream
/// depends only on its key and never on scheduling. Distributions are
/// implemented here rather than with <random> so results are identical across
/// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t key) noexcept : key_(mix64(key)) {}

  std::uint64_t next_u64() noexcept {
    return mix64(key_ + (counter_++) * 0xd1b54a32d192ed03ULL);
  }

  /// Uniform in [0, 1).
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] (inclusive).
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Standard normal via Box-Muller (no cached second value, so every call
  /// consumes exactly two draws).
  double normal() noexcept;
  double normal(double mean, double sigma) noexcept { return mean + sigma * normal(); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace tracksketch
