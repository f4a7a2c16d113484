#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <string_view>

namespace swrl {

/// SplitMix64 finalizer; used to expand seeds and to mix stream coordinates.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// xoshiro256** generator. Small state, so one instance per Monte-Carlo
/// trial is cheap; satisfies UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double normal() { return normal_(*this); }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Counter-based stream splitting. Every Monte-Carlo trial draws from the
/// stream (master seed, tag, index), so results do not depend on which worker
/// ran the trial.
class StreamKey {
 public:
  StreamKey(std::uint64_t master_seed, std::string_view tag) noexcept
      : seed_(master_seed), tag_(fnv1a64(tag)) {}

  Rng stream(std::uint64_t index) const noexcept;

  /// Independent key family nested under this one.
  StreamKey child(std::string_view tag) const noexcept;

  std::uint64_t master_seed() const noexcept { return seed_; }

 private:
  StreamKey(std::uint64_t seed, std::uint64_t tag_hash, int) noexcept
      : seed_(seed), tag_(tag_hash) {}

  std::uint64_t seed_;
  std::uint64_t tag_;
};

}  // namespace swrl
