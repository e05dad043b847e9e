#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string_view>

namespace qdswap {

using Complex = std::complex<double>;
using Vector4c = Eigen::Vector4cd;
using Matrix4c = Eigen::Matrix4cd;

/// Two-qubit computational basis order used everywhere in this project:
/// (HH, HV, VH, VV), H = 0, V = 1, index = 2*q1 + q2.
enum class BellLabel { PhiPlus = 0, PhiMinus = 1, PsiPlus = 2, PsiMinus = 3 };

constexpr std::array<BellLabel, 4> kAllBellLabels = {BellLabel::PhiPlus, BellLabel::PhiMinus,
                                                     BellLabel::PsiPlus, BellLabel::PsiMinus};

std::string_view to_string(BellLabel label);

/// Normalized two-qubit pure state over the (HH, HV, VH, VV) basis.
class PureState2Q {
 public:
  /// Validates normalization to 1e-12; throws otherwise.
  static PureState2Q make(const Vector4c& amplitudes);

  /// Normalizes the input; throws on (near-)zero vectors.
  static PureState2Q normalized(const Vector4c& amplitudes);

  const Vector4c& amplitudes() const { return amp_; }
  Complex amplitude(int i) const { return amp_(i); }

  Matrix4c projector() const { return amp_ * amp_.adjoint(); }

 private:
  explicit PureState2Q(Vector4c amp) : amp_(std::move(amp)) {}
  Vector4c amp_;
};

/// Two-qubit density matrix: Hermitian (1e-12), unit trace (1e-10), and
/// positive semidefinite up to a numerical floor of -1e-9. Eigenvalues in
/// (-1e-9, 0) are clamped to zero with renormalization; anything below the
/// floor is a hard error.
class DensityMatrix2Q {
 public:
  static DensityMatrix2Q make(const Matrix4c& entries);

  static DensityMatrix2Q from_pure(const PureState2Q& psi);

  static DensityMatrix2Q maximally_mixed();

  const Matrix4c& matrix() const { return m_; }

  double purity() const { return (m_ * m_).trace().real(); }

 private:
  explicit DensityMatrix2Q(Matrix4c m) : m_(std::move(m)) {}
  Matrix4c m_;
};

/// Canonical Bell state with the 1/sqrt(2) normalization:
/// PhiPlus = (HH+VV)/sqrt2, PhiMinus = (HH-VV)/sqrt2,
/// PsiPlus = (HV+VH)/sqrt2, PsiMinus = (HV-VH)/sqrt2.
PureState2Q bell_state(BellLabel label);

/// <Bell_label| rho |Bell_label>.
double fidelity_to_bell(const DensityMatrix2Q& rho, BellLabel label);

/// Fully entangled fraction: max over all maximally entangled |Phi> of
/// <Phi|rho|Phi>, computed as the largest eigenvalue of Re(rho) expressed in
/// the magic basis {|Phi+>, i|Phi->, i|Psi+>, |Psi->}. In [0.25, 1] for any
/// physical state.
double fully_entangled_fraction(const DensityMatrix2Q& rho);

/// The Bell label maximizing fidelity_to_bell, with its fidelity. This is the
/// reported herald-basis companion of the fully entangled fraction, which by
/// itself does not identify the optimal maximally entangled state.
struct BellFidelity {
  BellLabel label;
  double fidelity;
};
BellFidelity best_bell_fidelity(const DensityMatrix2Q& rho);

/// Wootters concurrence via the spin-flip spectrum; 0 for separable states.
double concurrence(const DensityMatrix2Q& rho);

/// Trace distance (1/2)||a - b||_1 between two density matrices.
double trace_distance(const DensityMatrix2Q& a, const DensityMatrix2Q& b);

}  // namespace qdswap
