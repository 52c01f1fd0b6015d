/*
 * Copyright (c) 2026 the trajgp authors
 * Licensed under the MIT License. See LICENSE file in the project root.
 */
#ifndef TRAJGP_RNG_HPP_
#define TRAJGP_RNG_HPP_

#include <cstdint>
#include <random>

namespace trajgp {

// splitmix64 single step (Vigna). Used to derive statistically independent
// sub-streams from one user-facing seed, so that per-individual generation
// is reproducible regardless of scheduling.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic sub-seed for stream `index` of master seed `seed`.
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t z = splitmix64(s);
  s = z ^ (index * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  return splitmix64(s);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(sub_seed(seed, stream));
}

}  // namespace trajgp

#endif  // TRAJGP_RNG_HPP_
