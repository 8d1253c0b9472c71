#pragma once

#include <cmath>
#include <cstdint>

namespace voidplace {

/// splitmix64 step; also used to derive independent per-task seeds from a
/// master seed so that results do not depend on how work is partitioned.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless per-stream seed: mixes (master, stream) into a fresh seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0xa0761d6478bd642fULL + stream * 0xe7037ed1a0b428dbULL);
  splitmix64(s);
  return splitmix64(s);
}

/// xoshiro256++ with fully pinned semantics. Standard-library engines are
/// deterministic per implementation but not across them; artifact outputs
/// must be reproducible from the seed alone, so the generator and the
/// normal transform below are fixed here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    for (auto& word : state_) word = splitmix64(seed);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on the open interval (0, 1).
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; caches the second variate.
  double next_normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586476925286766559 * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  /// Poisson count by exponential inter-arrival counting; O(mean) but exact
  /// and portable. mean must be finite and >= 0.
  long next_poisson(double mean) {
    if (mean <= 0.0) return 0;
    long count = -1;
    double total = 0.0;
    while (total <= mean) {
      total += -std::log(next_uniform());
      ++count;
    }
    return count;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  bool has_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace voidplace
