// SPDX-License-Identifier: MIT
//
// Deterministic random source. All draws go through hand-rolled
// distributions on top of mt19937_64 because the std:: distribution
// objects are implementation-defined and would break reproducibility of
// persisted artifacts across standard libraries.

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace foldsynth {

// 64-bit FNV-1a, used to fold strings into stream seeds.
inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [lo, hi], inclusive. Rejection sampling keeps the
  // result independent of how the engine words are consumed elsewhere.
  long long uniform_int(long long lo, long long hi) {
    if (lo >= hi) return lo;
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return lo + static_cast<long long>(x % span);
  }

  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<long long>(n) - 1));
  }

  // Uniform double in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool coin(double pTrue = 0.5) { return uniform01() < pTrue; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

  // First k positions of a random permutation of [0, n).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (k > n) k = n;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t j = i + index(n - i);
      std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
  }

 private:
  std::mt19937_64 engine_;
};

// Derives the per-run stream for (master seed, problem, pattern, seed index).
// Every run owns exactly one stream; evaluation fan-out never draws from it.
inline std::uint64_t run_stream_seed(std::uint64_t masterSeed, const std::string& problem,
                                     const std::string& pattern, std::uint64_t seedIndex) {
  std::uint64_t h = splitmix64(masterSeed);
  h = splitmix64(h ^ fnv1a64(problem));
  h = splitmix64(h ^ fnv1a64(pattern));
  h = splitmix64(h ^ seedIndex);
  return h;
}

}  // namespace foldsynth
