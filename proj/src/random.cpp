#include "swrl/random.hpp"

#include <bit>

namespace swrl {

Rng::Rng(std::uint64_t seed) noexcept {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x = splitmix64(x);
    word = x;
  }
}

Rng::result_type Rng::operator()() noexcept {
  const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = std::rotl(s_[3], 45);
  return result;
}

Rng StreamKey::stream(std::uint64_t index) const noexcept {
  std::uint64_t h = splitmix64(seed_);
  h = splitmix64(h ^ tag_);
  h = splitmix64(h ^ index);
  return Rng(h);
}

StreamKey StreamKey::child(std::string_view tag) const noexcept {
  return StreamKey(seed_, splitmix64(tag_) ^ fnv1a64(tag), 0);
}

}  // namespace swrl
