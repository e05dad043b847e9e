#include "qdswap/source/pair_matching.hpp"

#include <cmath>

#include "qdswap/common/error.hpp"
#include "qdswap/common/rng.hpp"

namespace qdswap {

double pair_match_probability(double energy_spread_ueV, double tuning_range_ueV,
                              std::uint64_t n_samples, std::uint64_t seed) {
  if (energy_spread_ueV <= 0.0) throw_invalid("energy spread must be positive");
  if (tuning_range_ueV < 0.0) throw_invalid("tuning range must be nonnegative");
  if (n_samples < 10000) throw_invalid("pair matching requires at least 1e4 samples");

  const double sigma = kSpreadToSigma * energy_spread_ueV;
  constexpr std::uint64_t kShards = 64;
  const std::uint64_t per_shard = n_samples / kShards;
  const std::uint64_t remainder = n_samples % kShards;

  std::uint64_t hits = 0;
  for (std::uint64_t shard = 0; shard < kShards; ++shard) {
    Rng rng(seed, shard);
    const std::uint64_t count = per_shard + (shard < remainder ? 1 : 0);
    for (std::uint64_t i = 0; i < count; ++i) {
      const double e1 = sigma * rng.normal();
      const double e2 = sigma * rng.normal();
      if (std::abs(e1 - e2) <= tuning_range_ueV) ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(n_samples);
}

}  // namespace qdswap
