#pragma once

#include <string>
#include <vector>

#include "qdswap/swap/scenario.hpp"

namespace qdswap {

/// Multiplicative factors of the swapping-rate budget.
///
/// P_swap is the probability per pulse of heralding a swapped pair: pair
/// creation and BSM-arm delivery for both sources, the linear-optics BSM
/// success fraction, and the squared blinking on-fraction. The four-fold rate
/// additionally pays the kept-arm detection of both swapped photons.
struct RateBudgetInputs {
  double pair_generation_1 = 0.9;
  double pair_generation_2 = 0.9;
  double bsm_arm_efficiency_1 = 1.0;   // per-photon end-to-end, detector included
  double bsm_arm_efficiency_2 = 1.0;
  double bsm_success_fraction = 0.5;   // both Psi heralds; the linear-optics ceiling
  double blinking_on_1 = 1.0;
  double blinking_on_2 = 1.0;
  double kept_arm_efficiency_1 = 1.0;
  double kept_arm_efficiency_2 = 1.0;
  double effective_rep_rate_MHz = 160.0;

  void validate() const;
};

struct RateFactor {
  std::string name;
  double value;
};

struct RateBudget {
  std::vector<RateFactor> swap_factors;  // product = p_swap
  std::vector<RateFactor> kept_factors;  // extra factors from p_swap to p_fourfold
  double p_swap = 0.0;
  double p_fourfold = 0.0;
  double fourfold_rate_hz = 0.0;
};

RateBudget rate_budget(const RateBudgetInputs& inputs);

/// Budget inputs drawn from a scenario's source parameters: BSM-arm
/// efficiencies from the interfering transition, kept-arm from the other.
RateBudgetInputs budget_inputs_from_scenario(const SwapScenario& scenario);

/// Source-improvement preset: blinking removed, delivery efficiencies pushed
/// to state-of-the-art values. The kept-arm figure is the effective
/// post-selected acceptance implied by the targeted coincidence rate, not a
/// physical transmission.
RateBudgetInputs improved_budget_inputs(const RateBudgetInputs& base);

}  // namespace qdswap
