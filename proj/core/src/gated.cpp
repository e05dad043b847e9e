#include "qdswap/tomo/gated.hpp"

namespace qdswap {

GatedTomographyResult gated_tomography(const SwapScenario& scenario, BellLabel herald,
                                       double window_ps, double flux, std::uint64_t seed,
                                       const SwapEngineOptions& opts) {
  const HeraldedState heralded = swapped_state_analytic(scenario, herald, window_ps, opts);
  const CountTable counts = simulate_counts(heralded.rho, full_setting_set(), flux, seed);
  const MleResult fit = reconstruct_mle(counts);
  return {fit.rho, fully_entangled_fraction(fit.rho), heralded.fef};
}

}  // namespace qdswap
