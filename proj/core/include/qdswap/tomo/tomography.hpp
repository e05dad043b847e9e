#pragma once

#include <cstdint>
#include <vector>

#include "qdswap/quantum/two_qubit.hpp"

namespace qdswap {

/// Single-qubit polarization analyzer states used by the tomography stage.
enum class Analyzer { H, V, D, A, R, L };

std::string_view to_string(Analyzer a);
Analyzer analyzer_from_string(std::string_view s);

/// Jones vector of the analyzer state over (H, V).
Eigen::Vector2cd analyzer_state(Analyzer a);

/// One coincidence-measurement setting: an analyzer per arm.
struct MeasurementSetting {
  Analyzer arm1;
  Analyzer arm2;

  Matrix4c projector() const;
};

/// The overcomplete 36-setting set: all pairs from {H,V,D,A,R,L}.
std::vector<MeasurementSetting> full_setting_set();

struct CountRecord {
  MeasurementSetting setting;
  double expected = 0.0;       // expected coincidences
  std::uint64_t sampled = 0;   // Poisson sample
  double weight = 1.0;         // relative acquisition time
};

struct CountTable {
  std::vector<CountRecord> records;
};

/// Expected counts proportional to Tr(rho P1 (x) P2) scaled so a full basis
/// group (the four projector combinations of one basis pair) accumulates
/// total_flux counts; sampled counts are Poisson, deterministic per seed.
CountTable simulate_counts(const DensityMatrix2Q& rho,
                           const std::vector<MeasurementSetting>& settings, double total_flux,
                           std::uint64_t seed);

struct LinearEstimate {
  Matrix4c matrix;   // Hermitian, unit trace; PSD not guaranteed
  bool physical;     // true when all eigenvalues >= -1e-9
};

/// Linear inversion through the pseudoinverse of the measurement map.
/// Requires an informationally complete setting set.
LinearEstimate reconstruct_linear(const CountTable& table);

struct MleOptions {
  double gradient_tolerance = 1e-8;
  int max_iterations = 10000;
};

struct MleResult {
  DensityMatrix2Q rho;
  double log_likelihood;
  int iterations;
};

/// Maximum-likelihood reconstruction over the factorized (T-matrix)
/// parameterization rho = T T^dag / tr, ascending the Poisson log-likelihood
/// with backtracking line search. Throws on non-convergence.
MleResult reconstruct_mle(const CountTable& table, const MleOptions& opts = {});

/// Poisson log-likelihood of a physical state against a count table.
double poisson_log_likelihood(const DensityMatrix2Q& rho, const CountTable& table);

struct BootstrapResult {
  double fef_mean;
  double fef_stddev;
  std::vector<double> fef_samples;
};

/// Parametric bootstrap of the fully entangled fraction: counts re-sampled
/// from the fitted expectations, each replica reconstructed by MLE.
BootstrapResult bootstrap_fef(const CountTable& table, int n_replicas, std::uint64_t seed,
                              const MleOptions& opts = {});

}  // namespace qdswap
