#pragma once

#include <cstdint>

#include "qdswap/swap/swap_engine.hpp"

namespace qdswap {

struct MonteCarloResult {
  DensityMatrix2Q rho;
  std::uint64_t herald_count = 0;
  std::uint64_t n_shots = 0;
  double fef = 0.0;
  double herald_probability = 0.0;  // herald_count / n_shots
};

struct MonteCarloOptions {
  bool allow_detuned = false;
  int threads = 1;
};

/// Event-by-event simulation of the swap, independent of the analytic
/// integration path: cascade emission times are sampled from the decay
/// kinetics, the interfering photons become conditional pure wavepackets
/// given the partner detection times, residual charge noise enters as
/// per-shot Lorentzian frequency kicks, and the detection pattern and times
/// are sampled from the exact two-photon output distribution of the beam
/// splitter. Heralded kept-pair states are accumulated per shot.
///
/// Deterministic for a given seed: samples are split across a fixed number of
/// substreams regardless of thread count, and shard results merge in a fixed
/// order. Throws when no shot heralds inside the window.
MonteCarloResult swapped_state_montecarlo(const SwapScenario& scenario, BellLabel herald,
                                          double window_ps, std::uint64_t n_shots,
                                          std::uint64_t seed, const MonteCarloOptions& opts = {});

}  // namespace qdswap
