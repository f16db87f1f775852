// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The detectorbench Authors

#pragma once

/**
 * @file rng.hpp
 * Deterministic randomness and hashing, pinned by algorithm.
 *
 * Every random draw in the toolkit goes through SplitMix64 so that seeded
 * runs reproduce bit-for-bit across platforms and across independent
 * implementations of this toolkit. The exact recipes:
 *
 *   next()          Vigna's splitmix64 (reference constants, public domain)
 *   next_below(n)   next() % n
 *   next_double()   (next() >> 11) * 2^-53, uniform in [0, 1)
 *   derive_seed     state' = mix(state ^ mix(salt)) applied per salt, where
 *                   mix() is the splitmix64 output scrambler
 *   fnv1a64         FNV-1a, 64-bit (offset 0xcbf29ce484222325, prime 0x100000001b3)
 */

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

namespace detectorbench {

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t splitmix_scramble(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += detail::kGolden;
    return detail::splitmix_scramble(state_);
  }

  /// Uniform in [0, n). n must be > 0. Modulo mapping, kept for simplicity
  /// and cross-implementation reproducibility; the bias is negligible for
  /// the range sizes used here (documents, tokens, bins).
  constexpr std::uint64_t next_below(std::uint64_t n) { return next() % n; }

  /// Uniform double in [0, 1) with 53 bits of precision.
  constexpr double next_double() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed and a list of salts
/// (topic index, document index, perturbation index, ...). Order-sensitive.
inline constexpr std::uint64_t derive_seed(std::uint64_t base,
                                           std::initializer_list<std::uint64_t> salts) {
  std::uint64_t state = detail::splitmix_scramble(base + detail::kGolden);
  for (std::uint64_t salt : salts) {
    state = detail::splitmix_scramble(state ^ detail::splitmix_scramble(salt + detail::kGolden));
  }
  return state;
}

inline constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

/// 16-char lowercase hex, zero padded.
std::string to_hex(std::uint64_t value);

}  // namespace detectorbench
