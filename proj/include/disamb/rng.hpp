#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace disamb::rng {

// All randomized stages draw from mt19937_64 through the helpers below.
// std::shuffle / std::uniform_*_distribution are implementation-defined, so
// they never appear here; the draws are pinned across standard libraries.
using Engine = std::mt19937_64;

inline constexpr const char* kAlgorithmId = "mt19937_64/fisher-yates";

/// Uniform draw from [0, n). n must be positive.
inline std::uint64_t uniform_index(Engine& eng, std::uint64_t n) {
  return eng() % n;
}

/// Uniform double in [0, 1).
inline double uniform01(Engine& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller.
inline double normal(Engine& eng) {
  double u1 = static_cast<double>((eng() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  double u2 = uniform01(eng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Fisher-Yates shuffle with modulo draws.
template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_index(eng, i));
    std::swap(v[i - 1], v[j]);
  }
}

/// k distinct indices sampled from [0, n), in draw order.
inline std::vector<std::size_t> sample_without_replacement(Engine& eng, std::size_t n,
                                                           std::size_t k) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  std::vector<std::size_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k && !pool.empty(); ++i) {
    std::size_t j = static_cast<std::size_t>(uniform_index(eng, pool.size()));
    out.push_back(pool[j]);
    pool[j] = pool.back();
    pool.pop_back();
  }
  return out;
}

}  // namespace disamb::rng
