#pragma once

#include "qdswap/quantum/two_qubit.hpp"
#include "qdswap/swap/rate_budget.hpp"
#include "qdswap/swap/scenario.hpp"

namespace qdswap {

struct SwapEngineOptions {
  bool allow_detuned = false;  // let the detuned control run instead of erroring
  bool corrected = false;      // remove the multiphoton admixture and BS imbalance
};

struct HeraldedState {
  DensityMatrix2Q rho;
  double fef = 0.0;
  /// Probability per pulse of this herald with both BSM photons delivered to
  /// the station; delivery losses live in the rate budget.
  double herald_probability = 0.0;
};

/// Heralded swapped state of the kept photon pair for one post-selection
/// window, from the time-integrated interference model: the four-photon state
/// is propagated through the beam splitter, projected on the herald's
/// detection patterns, and integrated over detection times with jitter
/// convolution inside |t1 - t2| <= window. The white-noise branches of both
/// sources are mixed in classically. window_ps may be infinite (no
/// post-selection); window 0 with zero jitter is the coincident-detection
/// limit.
HeraldedState swapped_state_analytic(const SwapScenario& scenario, BellLabel herald,
                                     double window_ps, const SwapEngineOptions& opts = {});

/// Kept-pair state gated only on a two-photon BSM event of any outcome,
/// including the same-detector bunching events; for ideal inputs this is the
/// equal mixture of the four Bell states.
DensityMatrix2Q unheralded_state(const SwapScenario& scenario, const SwapEngineOptions& opts = {});

struct FidelityWindowRow {
  double window_ps;
  double f_psi_minus;
  double f_psi_plus;
  double rate_hz;          // four-fold rate inside the window
  double f_corrected_psi_minus;
  double f_corrected_psi_plus;
  double herald_probability;  // both heralds combined, per pulse at the station
};

/// One row per scenario window. Fidelities are fully entangled fractions of
/// the heralded matrices; corrected columns remove the multiphoton admixture
/// and BS imbalance; the rate column scales the budget's four-fold rate by the
/// window acceptance fraction of the simulated coincidence-time distribution.
std::vector<FidelityWindowRow> fidelity_vs_window(const SwapScenario& scenario,
                                                  const RateBudgetInputs& budget_inputs,
                                                  const SwapEngineOptions& opts = {});

/// Sum of all BSM outcome probabilities over the full window; equals 1 for any
/// valid scenario (detection unitarity). Exposed for verification.
double bsm_outcome_probability_total(const SwapScenario& scenario);

}  // namespace qdswap
