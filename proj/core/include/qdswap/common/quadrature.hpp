#pragma once

#include <cmath>
#include <complex>
#include <functional>

namespace qdswap {

/// Adaptive Simpson quadrature for complex-valued integrands on [a, b].
/// Recursion depth is bounded; tolerance is on the absolute error of each
/// panel, distributed across splits in the usual way.
std::complex<double> integrate_adaptive(const std::function<std::complex<double>(double)>& f,
                                        double a, double b, double tol = 1e-10,
                                        int max_depth = 48);

/// Real-valued convenience overload.
double integrate_adaptive_real(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int max_depth = 48);

/// Semi-infinite integral of f over [a, inf) for integrands decaying at least
/// exponentially with the given rate scale: integrates in windows of a few
/// decay lengths until the contribution becomes negligible.
std::complex<double> integrate_decaying(const std::function<std::complex<double>(double)>& f,
                                        double a, double decay_scale, double tol = 1e-10);

}  // namespace qdswap
