#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace audelta {

// splitmix64 finalizer; used both as a mixer for seed derivation and to
// expand one 64-bit seed into engine state.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Deterministic sub-seed from a master seed and a label, so independent
// streams (per example, per epoch, per module) never share state.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a over the label bytes
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return splitmix64(master ^ splitmix64(h));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index) {
  return splitmix64(derive_seed(master, label) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

// Thin wrapper around mt19937_64 with explicit, implementation-pinned
// conversions to doubles. std:: distributions are avoided on purpose:
// their algorithms are not specified, and corpus regeneration must stay
// bit-identical across standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n-1]. Modulo bias is < 2^-40 for desk-scale n.
  std::uint64_t uniform_index(std::uint64_t n) { return n ? engine_() % n : 0; }

  // Box-Muller, one value per call (the spare is kept).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace audelta
