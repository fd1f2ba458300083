#pragma once

#include <cmath>
#include <cstdint>

namespace wrs {

/// Addressing for a reproducible random stream: every generator derives its
/// engine seed as a pure function of (master_seed, replica_index, salt).
/// Distinct replica indices always map to distinct streams, and generators
/// with different salts never share a stream even for equal (seed, replica).
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t replica_index = 0;

  SeedSpec with_replica(std::uint64_t r) const { return {master_seed, r}; }
};

/// splitmix64 finalizer (Steele et al.). Bijective on 64-bit words, so
/// distinct inputs give distinct outputs.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

/// Derived stream seed. replica enters through an odd multiplier, so the
/// map replica -> seed is injective for a fixed master/salt.
inline std::uint64_t derive_stream(const SeedSpec& seed, std::uint64_t salt) {
  std::uint64_t z = seed.master_seed;
  z ^= 0x9e3779b97f4a7c15ULL * (seed.replica_index + 1);
  z ^= mix64(salt + 0x2545f4914f6cdd1dULL);
  return mix64(z);
}

/// xoshiro256++ with fully specified output mapping. We roll the uniform and
/// Gaussian mappings by hand (bit shift / Marsaglia polar) instead of using
/// <random> distributions, whose output is implementation-defined; this keeps
/// streams bit-identical across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t stream_seed) {
    std::uint64_t z = stream_seed;
    for (auto& w : state_) w = mix64(z += 0x9e3779b97f4a7c15ULL);
    has_spare_ = false;
  }
  Rng(const SeedSpec& seed, std::uint64_t salt) : Rng(derive_stream(seed, salt)) {}

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

  /// Uniform on [0, 1): top 53 bits scaled by 2^-53.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Symmetric +-1 draw from one output bit.
  double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

  /// Standard normal, Marsaglia polar method.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Fixed salts, one per sampling purpose. gen_weight and ito_reference draw
/// from independent streams even when handed the same SeedSpec.
namespace stream_salt {
inline constexpr std::uint64_t kRademacher = 0x01;
inline constexpr std::uint64_t kFgn = 0x02;
inline constexpr std::uint64_t kWeight = 0x03;
inline constexpr std::uint64_t kBrownianRef = 0x04;
}  // namespace stream_salt

}  // namespace wrs
