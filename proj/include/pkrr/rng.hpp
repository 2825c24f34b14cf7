#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace pkrr {

// Deterministic random source. The engine (std::mt19937_64) is fully specified
// by the standard; the standard *distributions* are not, so every sampling
// helper below is hand-rolled. Given the same seed, all streams are identical
// on every platform and toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [0, n), unbiased via rejection.
  std::size_t below(std::size_t n);

  // Standard normal via Box-Muller; the second value of each pair is cached.
  double normal();

  // Fisher-Yates, descending index order.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

// Derives an independent stream seed from a root seed and a purpose tag
// (FNV-1a over the tag, then two splitmix64 rounds). Used so that split,
// clustering init, and partitioning each get documented sub-streams.
std::uint64_t sub_seed(std::uint64_t seed, std::string_view tag);

// Seeded permutation of [0, n).
std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng);

}  // namespace pkrr
