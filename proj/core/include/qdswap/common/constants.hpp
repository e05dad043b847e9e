#pragma once

namespace qdswap {

/// Reduced Planck constant in the unit system used throughout: micro-eV times picoseconds.
/// A fine-structure splitting S (ueV) acting for a delay tau (ps) winds a phase S*tau/hbar.
inline constexpr double kHbarUeVPs = 658.2119569;

/// Conversion from a Gaussian full width at half maximum to its standard deviation.
inline constexpr double kFwhmToSigma = 0.42466090014400953;  // 1 / (2 sqrt(2 ln 2))

}  // namespace qdswap
