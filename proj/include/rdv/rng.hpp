#pragma once

#include <cstdint>
#include <string_view>

namespace rdv {

// Counter-based randomness: every draw is a pure function of (seed, index),
// so any slot of any stream can be regenerated without replaying history.
// That is what makes Monte Carlo runs replay-exact and order-independent.

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Value at position `index` of the stream identified by `seed`.
constexpr std::uint64_t stream_at(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) + index * kGolden);
}

/// Child seed for an independent sub-stream (purpose tag, trial index, ...).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ splitmix64(tag ^ 0xA5A5'5A5A'C3C3'3C3Cull));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                    std::uint64_t c) {
  return derive_seed(derive_seed(seed, a, b), c);
}

/// Uniform integer in [0, bound). Modulo bias is negligible for the small
/// bounds used here (bound << 2^32).
constexpr std::uint64_t uniform_below(std::uint64_t word, std::uint64_t bound) {
  return word % bound;
}

/// Uniform channel label in [1, n].
constexpr std::uint32_t uniform_channel(std::uint64_t word, std::uint32_t n) {
  return static_cast<std::uint32_t>(word % n) + 1;
}

/// Uniform double in [0, 1).
constexpr double uniform01(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

/// FNV-1a, used to embed a config fingerprint in result file names.
constexpr std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : data) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace rdv
