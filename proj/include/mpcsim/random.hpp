#pragma once

#include <cstdint>
#include <initializer_list>

namespace mpcsim {

// Counter-based randomness. Every random decision in the algorithms is a pure
// function of (seed, context words), so the same draw can be recomputed on any
// machine and the in-memory and simulated variants agree bit for bit.

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t hash_words(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc908ULL);
  for (std::uint64_t w : words) h = splitmix64(h ^ splitmix64(w));
  return h;
}

/// Maps a 64-bit hash to [0, bound). Bias is at most bound / 2^64.
constexpr std::uint64_t uniform_below(std::uint64_t h, std::uint64_t bound) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(h) * bound) >> 64);
}

/// Maps a 64-bit hash to [0, 1).
constexpr double unit_interval(std::uint64_t h) {
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Domain tags keep independent uses of one seed from colliding.
namespace stream {
inline constexpr std::uint64_t kFriend = 1;
inline constexpr std::uint64_t kColor = 2;
inline constexpr std::uint64_t kSample = 3;
inline constexpr std::uint64_t kRho = 4;
inline constexpr std::uint64_t kMisBits = 5;
inline constexpr std::uint64_t kTrial = 6;
inline constexpr std::uint64_t kFallback = 7;
inline constexpr std::uint64_t kRepeat = 8;
inline constexpr std::uint64_t kMachine = 9;
inline constexpr std::uint64_t kGenerator = 10;
inline constexpr std::uint64_t kSpotCheck = 11;
}  // namespace stream

}  // namespace mpcsim
