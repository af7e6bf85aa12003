#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ffg {

using Rng = std::mt19937_64;

// splitmix64 finalizer; whitens stream seeds so that related
// (master, label, index) triples give unrelated streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Every random draw in the harness comes from a stream addressed by
// (master_seed, label, index). Trials reuse the same labels so that
// common-random-number comparisons see identical draws.
inline Rng derive_rng(std::uint64_t master, std::string_view label,
                      std::uint64_t index = 0) {
  return Rng(mix64(master ^ mix64(fnv1a(label) ^ mix64(index))));
}

}  // namespace ffg
