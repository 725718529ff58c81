#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace rtpzero {

// Identifies one independent random stream.  Every stochastic routine in the
// library takes a SeedSpec instead of a shared engine, so any piece of a run
// can be reproduced in isolation and parallel schedules cannot change results.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;
};

// SplitMix64 finalizer (Vigna / Steele et al.).  Used only to whiten seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream derivation: the engine seed is mix64(mix64(master_seed) ^
// mix64(stream_index * golden_gamma)).  Two distinct stream indices under the
// same master seed give unrelated engine states; the same pair always gives
// the same state, on every platform.
inline std::uint64_t derive_seed(const SeedSpec& s) {
  return mix64(mix64(s.master_seed) ^ mix64(s.stream_index * 0x9E3779B97F4A7C15ULL));
}

// Random stream with fully specified output.  The engine is std::mt19937_64,
// whose bit stream is pinned by the language standard; all distribution
// transforms are implemented here because the standard library's
// distributions are implementation-defined and would break cross-platform
// reproducibility of stored results.
class Stream {
 public:
  explicit Stream(const SeedSpec& s) : eng_(derive_seed(s)) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0,1), 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1); never returns an exact endpoint.
  double uniform01_open() {
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via the Box-Muller transform.  Pairs are generated from
  // exactly two uniforms, so consumption is deterministic (no rejection).
  void normal_pair(double& z0, double& z1) {
    const double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    z0 = r * std::cos(a);
    z1 = r * std::sin(a);
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double z0, z1;
    normal_pair(z0, z1);
    spare_ = z1;
    have_spare_ = true;
    return z0;
  }

  // +1 or -1 with equal probability (top bit of the engine output).
  double rademacher() { return (eng_() >> 63) ? 1.0 : -1.0; }

  // Uniform on [-sqrt(3), sqrt(3)]: mean 0, variance 1.
  double uniform_scaled() {
    return (2.0 * uniform01() - 1.0) * 1.7320508075688772;
  }

  // Laplace with scale 1/sqrt(2): mean 0, variance 1.  Inverse-CDF transform
  // on an open-interval uniform so the log never sees 0.
  double laplace_scaled() {
    const double u = uniform01_open() - 0.5;
    const double b = 0.7071067811865476;  // 1/sqrt(2)
    return (u < 0.0 ? 1.0 : -1.0) * b * std::log1p(-2.0 * std::fabs(u));
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace rtpzero
