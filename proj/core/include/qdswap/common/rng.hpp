#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qdswap {

/// Deterministic pseudo-random stream with explicit sampling routines.
///
/// All distributions are implemented on top of the raw 64-bit stream so that a
/// given (seed, stream) pair produces bit-identical samples on every platform;
/// the standard library distributions are implementation-defined and would not.
/// The generator is xoshiro256**; streams are derived from the user seed with
/// SplitMix64 so that shard substreams are statistically independent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    for (auto& s : state_) s = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1], safe as a logarithm argument.
  double uniform_pos() { return 1.0 - uniform(); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  /// Exponential with the given mean (= lifetime in ps for decay sampling).
  double exponential(double mean) { return -mean * std::log(uniform_pos()); }

  /// Standard normal via Box-Muller; deterministic including the cached spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

  /// Cauchy (Lorentzian) with half width gamma; used for spectral-diffusion kicks.
  double cauchy(double gamma) {
    return gamma * std::tan(std::numbers::pi * (uniform() - 0.5));
  }

  /// Poisson sample; inversion for small means, PTRS-style normal cutover is
  /// avoided in favour of a simple deterministic split at mean 64.
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 64.0) {
      const double l = std::exp(-mean);
      std::uint64_t k = 0;
      double p = 1.0;
      do {
        ++k;
        p *= uniform_pos();
      } while (p > l);
      return k - 1;
    }
    // Split recursively: sum of two independent Poissons with half the mean.
    const std::uint64_t a = poisson(mean / 2.0);
    const std::uint64_t b = poisson(mean / 2.0);
    return a + b;
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace qdswap
