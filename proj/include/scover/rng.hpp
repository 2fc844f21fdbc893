#pragma once

#include <cstdint>
#include <vector>

namespace scover {

// splitmix64 step; used both as a mixer and as the stream-seed derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (seed, a, b). Each subsample
// repetition owns one stream, so serial and parallel execution draw the
// same numbers.
inline std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = seed;
  std::uint64_t h = splitmix64(s);
  s = h ^ (a + 0x9e3779b97f4a7c15ull);
  h = splitmix64(s);
  s = h ^ (b + 0xbf58476d1ce4e5b9ull);
  return splitmix64(s);
}

// Small deterministic generator (xorshift-star family via splitmix64 steps).
// Kept self-contained so outputs do not depend on the standard library's
// distribution implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() { return splitmix64(state_); }

  // Uniform integer in [0, bound), bound >= 1. Multiply-shift mapping.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

private:
  std::uint64_t state_;
};

// First n positions of a seeded Fisher-Yates pass over {0,..,count-1}.
inline std::vector<std::uint32_t> sample_indices(Rng& rng, std::uint32_t count, std::uint32_t n) {
  std::vector<std::uint32_t> idx(count);
  for (std::uint32_t i = 0; i < count; ++i) idx[i] = i;
  for (std::uint32_t i = 0; i < n; ++i) {
    std::uint32_t j = i + static_cast<std::uint32_t>(rng.below(count - i));
    std::uint32_t tmp = idx[i];
    idx[i] = idx[j];
    idx[j] = tmp;
  }
  idx.resize(n);
  return idx;
}

} // namespace scover
