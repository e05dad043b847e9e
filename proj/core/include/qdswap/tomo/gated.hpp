#pragma once

#include "qdswap/swap/swap_engine.hpp"
#include "qdswap/tomo/tomography.hpp"

namespace qdswap {

struct GatedTomographyResult {
  DensityMatrix2Q rho;
  double fef;
  double true_fef;  // of the underlying heralded state, before counting noise
};

/// Full pipeline of the experiment: heralded swapped state -> simulated
/// coincidence counts at the given flux -> maximum-likelihood reconstruction.
GatedTomographyResult gated_tomography(const SwapScenario& scenario, BellLabel herald,
                                       double window_ps, double flux, std::uint64_t seed,
                                       const SwapEngineOptions& opts = {});

}  // namespace qdswap
