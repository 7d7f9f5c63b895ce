#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace mldfs {

// splitmix64 finalizer. Also used statelessly to derive independent seed
// streams, so that e.g. per-tree RNGs never overlap the bootstrap RNG.
constexpr uint64_t splitmix64_mix(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr uint64_t derive_seed(uint64_t master, uint64_t stream) {
  return splitmix64_mix(master + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

// Small deterministic generator (splitmix64 sequence). Deliberately not a
// std:: distribution: those are implementation-defined, and every number in
// this project must reproduce bit-for-bit across toolchains.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return splitmix64_mix(state_);
  }

  uint32_t next_u32() { return static_cast<uint32_t>(next_u64() >> 32); }

  // Uniform in [0, n), n > 0. Modulo bias is below 2^-32 for the ranges
  // used here, which is irrelevant next to the modelling error.
  uint32_t below(uint32_t n) { return static_cast<uint32_t>(next_u64() % n); }
  size_t index(size_t n) { return static_cast<size_t>(next_u64() % n); }

  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }

  // Standard normal via Box-Muller; second value of each pair is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = unit();
    while (u1 <= 0.0) u1 = unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * unit();
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  // k distinct values from [0, n), in draw order (partial Fisher-Yates).
  std::vector<int> sample_without_replacement(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    if (k > n) k = n;
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
      int j = i + static_cast<int>(below(static_cast<uint32_t>(n - i)));
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }

 private:
  uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace mldfs
