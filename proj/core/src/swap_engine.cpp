#include "qdswap/swap/swap_engine.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "qdswap/common/constants.hpp"
#include "qdswap/common/error.hpp"
#include "qdswap/common/quadrature.hpp"

namespace qdswap {

namespace {

using C = std::complex<double>;
constexpr double kInf = std::numeric_limits<double>::infinity();

int pol_index(Pol p) { return p == Pol::H ? 0 : 1; }

// ---------------------------------------------------------------------------
// Pair coherence kernels.
//
// For source i with the BSM performed on transition B (kept transition K),
// F^{pq}(x, y) = integral over the kept photon's detection time of
// G^p(w, x) conj(G^q(w, y)), where G^p is the joint two-photon amplitude of
// the cascade for polarization p. With one-sided exponential envelopes the
// kernel is a short sum of terms  coef * exp(-cx*x - cy*y - cmin*min(x,y)).
// All polarization-dependent frequencies (the FSS doublet of both photons and
// the central detuning of the interfering line) live in the complex exponents.
// ---------------------------------------------------------------------------

struct KernelTerm {
  C coef;
  C cx;
  C cy;
  C cmin;
};

struct SourceKernel {
  double t_xx;       // XX lifetime, ps
  double t_x;        // X lifetime, ps
  double fss_rad;    // S / hbar, rad/ps
  double delta_rad;  // central detuning of the BSM line, rad/ps
  Transition bsm;

  // BSM-photon angular frequency for polarization p. The doublet is split
  // symmetrically; energy conservation fixes opposite signs for X and XX.
  double bsm_omega(Pol p) const {
    const double sign = (p == Pol::H) ? 1.0 : -1.0;
    const double split = 0.5 * sign * fss_rad;
    return bsm == Transition::X ? delta_rad + split : delta_rad - split;
  }

  std::vector<KernelTerm> terms(Pol p, Pol q) const;
};

std::vector<KernelTerm> SourceKernel::terms(Pol p, Pol q) const {
  const double sp = (p == Pol::H) ? 1.0 : -1.0;
  const double sq = (q == Pol::H) ? 1.0 : -1.0;
  const C i(0.0, 1.0);
  const double norm = 1.0 / (t_xx * t_x);

  if (bsm == Transition::X) {
    // Kept photon is the XX; its doublet splitting is opposite to the X's.
    const double kept_diff = -(sp - sq) * 0.5 * fss_rad;  // omega_XX(p) - omega_XX(q)
    C z = C(1.0 / t_xx - 1.0 / t_x, kept_diff);
    if (std::abs(z) < 1e-12) z = C(1e-12, 0.0);
    const C cx = C(0.5 / t_x, bsm_omega(p));
    const C cy = C(0.5 / t_x, -bsm_omega(q));
    return {{norm / z, cx, cy, C(0.0, 0.0)}, {-norm / z, cx, cy, z}};
  }

  // BSM on the XX: the kept X photon's later decay cuts the coherence.
  const double kept_diff = (sp - sq) * 0.5 * fss_rad;  // omega_X(p) - omega_X(q)
  const C m = C(1.0 / t_x, kept_diff);
  const C cx = C(0.5 / t_xx - 0.5 / t_x, bsm_omega(p)) + m;
  const C cy = C(0.5 / t_xx - 0.5 / t_x, -bsm_omega(q)) + m;
  return {{norm / m, cx, cy, -m}};
}

// ---------------------------------------------------------------------------
// Window-weighted plane integrals.
//
// Every integrand is a sum of terms coef * exp(-a1 u1 - a2 u2 - am min) over
// u1, u2 >= 0, optionally times a function of |u1 - u2| (the acceptance
// window W and the pure-dephasing factor). Integrating the sum coordinate
// first leaves one numerical integral over the time difference:
//   I = [ G(a1 + kappa) + G(a2 + kappa) ] / (a1 + a2 + am),
//   G(s) = integral_0^inf W(d) exp(-s d) dd.
// ---------------------------------------------------------------------------

struct UTerm {
  C coef;
  C a1;
  C a2;
  C am;
};

enum class ArgMap { U1U2, U2U1, DiagU1, DiagU2 };

void append_instantiated(std::vector<UTerm>& out, const std::vector<KernelTerm>& terms,
                         ArgMap map, const C& scale) {
  for (const auto& t : terms) {
    UTerm u{t.coef * scale, C(0, 0), C(0, 0), C(0, 0)};
    switch (map) {
      case ArgMap::U1U2:
        u.a1 = t.cx;
        u.a2 = t.cy;
        u.am = t.cmin;
        break;
      case ArgMap::U2U1:
        u.a1 = t.cy;
        u.a2 = t.cx;
        u.am = t.cmin;
        break;
      case ArgMap::DiagU1:
        u.a1 = t.cx + t.cy + t.cmin;
        break;
      case ArgMap::DiagU2:
        u.a2 = t.cx + t.cy + t.cmin;
        break;
    }
    out.push_back(u);
  }
}

std::vector<UTerm> product_terms(const std::vector<UTerm>& a, const std::vector<UTerm>& b) {
  std::vector<UTerm> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) {
      out.push_back({x.coef * y.coef, x.a1 + y.a1, x.a2 + y.a2, x.am + y.am});
    }
  }
  return out;
}

struct DetectionWindowSpec {
  double half_width_ps = kInf;  // Delta t
  double jitter_sigma_ps = 0.0;  // per detector; difference smears by sigma*sqrt2

  bool is_full() const { return std::isinf(half_width_ps); }
};

// G(s) = integral_0^inf W(d) exp(-s d) dd for the window's acceptance W of the
// true time difference. The zero-width window is the coincident-detection
// limit: W degenerates to a point weight (sigma = 0) or the Gaussian density
// of the jitter difference.
C window_laplace(const DetectionWindowSpec& win, C s) {
  const double sig = win.jitter_sigma_ps * std::sqrt(2.0);
  if (win.is_full()) return 1.0 / s;

  const double decay_scale = 1.0 / std::max(1e-6, s.real());

  if (win.half_width_ps == 0.0) {
    if (sig == 0.0) return C(0.5, 0.0);
    auto f = [&](double d) {
      return std::exp(-s * d) * (std::exp(-0.5 * d * d / (sig * sig)) /
                                 (sig * std::sqrt(2.0 * std::numbers::pi)));
    };
    return integrate_decaying(f, 0.0, std::min(sig, decay_scale), 1e-13);
  }

  if (sig == 0.0) {
    return (1.0 - std::exp(-s * win.half_width_ps)) / s;
  }

  const double dt = win.half_width_ps;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  auto f = [&](double d) {
    const double acceptance =
        0.5 * (std::erf((dt - d) * inv_sqrt2 / sig) + std::erf((dt + d) * inv_sqrt2 / sig));
    return acceptance * std::exp(-s * d);
  };
  const double scale = std::min(decay_scale, 0.5 * (dt + 6.0 * sig)) + 1.0;
  return integrate_decaying(f, 0.0, scale, 1e-13);
}

C integrate_terms(const std::vector<UTerm>& terms, double kappa,
                  const DetectionWindowSpec& win) {
  C total(0.0, 0.0);
  for (const auto& t : terms) {
    const C denom = t.a1 + t.a2 + t.am;
    const C g = window_laplace(win, t.a1 + kappa) + window_laplace(win, t.a2 + kappa);
    total += t.coef * g / denom;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Pattern assembly.
// ---------------------------------------------------------------------------

double bs_amp(double reflectivity, BsPort port, int source) {
  // Input a (source 1) and b (source 2) onto output ports One/Two:
  // [sqrtR, sqrtT; sqrtT, -sqrtR].
  const double r = std::sqrt(reflectivity);
  const double t = std::sqrt(1.0 - reflectivity);
  if (port == BsPort::One) return source == 0 ? r : t;
  return source == 0 ? t : -r;
}

struct EngineSetup {
  SourceKernel k1, k2;
  double eps1, eps2;      // white-noise branch weights
  double kappa;           // total pure-dephasing rate of the interfering pair, 1/ps
  double reflectivity;
  double pbs_extinction;
  DetectionWindowSpec window;
};

// Unnormalized kept-pair contribution of one detection pattern, accumulated
// into a 4x4 matrix over (kept1, kept2) polarizations.
class PatternAccumulator {
 public:
  explicit PatternAccumulator(const EngineSetup& setup) : s_(setup) {}

  const Matrix4c& matrix() const { return m_; }
  double weight() const { return m_.trace().real(); }

  /// Pattern with two distinct channels; chA is read at u1, chB at u2.
  void add_split(DetectionChannel chA, DetectionChannel chB) { add_pattern(chA, chB, false); }

  /// Same-channel double click (unresolved by a real detector but part of the
  /// outcome bookkeeping).
  void add_double(DetectionChannel ch) { add_pattern(ch, ch, true); }

 private:
  void add_pattern(DetectionChannel chA, DetectionChannel chB, bool is_double) {
    const double glauber = is_double ? 0.5 : 1.0;
    const double w1 = bs_amp(s_.reflectivity, chA.port, 0) * bs_amp(s_.reflectivity, chB.port, 1);
    const double w2 = bs_amp(s_.reflectivity, chB.port, 0) * bs_amp(s_.reflectivity, chA.port, 1);

    const double eps = s_.pbs_extinction;
    for (Pol r : {Pol::H, Pol::V}) {
      const double lr = (r == chA.pol) ? 1.0 - eps : eps;
      if (lr == 0.0) continue;
      for (Pol st : {Pol::H, Pol::V}) {
        const double ls = (st == chB.pol) ? 1.0 - eps : eps;
        if (ls == 0.0) continue;
        add_true_pols(r, st, w1, w2, glauber * lr * ls);
      }
    }
  }

  void add_true_pols(Pol r, Pol st, double w1, double w2, double mult) {
    // Branch weights: clean x clean keeps the interference term, a noisy
    // photon on either side removes it and decouples that source's kept
    // polarization.
    const double wc = (1.0 - s_.eps1) * (1.0 - s_.eps2);
    const double wn1 = s_.eps1 * (1.0 - s_.eps2);
    const double wn2 = (1.0 - s_.eps1) * s_.eps2;
    const double wnn = s_.eps1 * s_.eps2;

    // Alternative 1: source 1 detected on channel A (pol r, time u1),
    // source 2 on channel B (pol st, u2). Alternative 2 is the exchange.
    std::vector<UTerm> d1_terms;
    append_instantiated(d1_terms, s_.k1.terms(r, r), ArgMap::DiagU1, 1.0);
    std::vector<UTerm> d1b;
    append_instantiated(d1b, s_.k2.terms(st, st), ArgMap::DiagU2, 1.0);
    const C d1 = integrate_terms(product_terms(d1_terms, d1b), 0.0, s_.window);

    std::vector<UTerm> d2_terms;
    append_instantiated(d2_terms, s_.k1.terms(st, st), ArgMap::DiagU2, 1.0);
    std::vector<UTerm> d2b;
    append_instantiated(d2b, s_.k2.terms(r, r), ArgMap::DiagU1, 1.0);
    const C d2 = integrate_terms(product_terms(d2_terms, d2b), 0.0, s_.window);

    std::vector<UTerm> x_terms;
    append_instantiated(x_terms, s_.k1.terms(r, st), ArgMap::U1U2, 1.0);
    std::vector<UTerm> xb;
    append_instantiated(xb, s_.k2.terms(st, r), ArgMap::U2U1, 1.0);
    const C x12 = integrate_terms(product_terms(x_terms, xb), s_.kappa, s_.window);

    const double q = 0.25 * mult;
    const int ri = pol_index(r);
    const int si = pol_index(st);

    // Clean branch: coherent alternatives.
    add(2 * ri + si, 2 * ri + si, wc * q * w1 * w1 * d1);
    add(2 * si + ri, 2 * si + ri, wc * q * w2 * w2 * d2);
    add(2 * ri + si, 2 * si + ri, wc * q * w1 * w2 * x12);
    add(2 * si + ri, 2 * ri + si, wc * q * w1 * w2 * std::conj(x12));

    // Source 1 noisy: its kept photon is unpolarized and uncorrelated.
    for (int k = 0; k < 2; ++k) {
      add(2 * k + si, 2 * k + si, wn1 * 0.5 * q * w1 * w1 * d1);
      add(2 * k + ri, 2 * k + ri, wn1 * 0.5 * q * w2 * w2 * d2);
    }
    // Source 2 noisy.
    for (int k = 0; k < 2; ++k) {
      add(2 * ri + k, 2 * ri + k, wn2 * 0.5 * q * w1 * w1 * d1);
      add(2 * si + k, 2 * si + k, wn2 * 0.5 * q * w2 * w2 * d2);
    }
    // Both noisy.
    for (int k = 0; k < 2; ++k) {
      for (int l = 0; l < 2; ++l) {
        add(2 * k + l, 2 * k + l, wnn * 0.25 * q * (w1 * w1 * d1 + w2 * w2 * d2));
      }
    }
  }

  void add(int row, int col, C value) { m_(row, col) += value; }

  const EngineSetup& s_;
  Matrix4c m_ = Matrix4c::Zero();
};

EngineSetup make_setup(const SwapScenario& sc, double window_ps, const SwapEngineOptions& opts) {
  sc.validate();
  if (sc.is_detuned() && !opts.allow_detuned) {
    throw_physics("scenario is detuned: the interfering lines do not match within tolerance");
  }

  EngineSetup setup;
  const Transition bsm = sc.bsm_photon;
  setup.k1 = {sc.source1.xx_lifetime_ps, sc.source1.x_lifetime_ps,
              sc.source1.fss_ueV / kHbarUeVPs, 0.0, bsm};
  setup.k2 = {sc.source2.xx_lifetime_ps, sc.source2.x_lifetime_ps,
              sc.source2.fss_ueV / kHbarUeVPs, sc.bsm_detuning_ueV() / kHbarUeVPs, bsm};

  double eps1 = source_noise_weight(sc.source1, sc.noise.noise_floor_scale);
  double eps2 = source_noise_weight(sc.source2, sc.noise.noise_floor_scale);
  if (opts.corrected) {
    eps1 = std::max(0.0, eps1 - 2.0 * sc.source1.g2_zero);
    eps2 = std::max(0.0, eps2 - 2.0 * sc.source2.g2_zero);
  }
  setup.eps1 = eps1;
  setup.eps2 = eps2;

  const double t_deph = sc.noise.dephasing_time_ps(bsm);
  setup.kappa = std::isfinite(t_deph) ? 2.0 / t_deph : 0.0;
  setup.reflectivity = opts.corrected ? 0.5 : sc.station.bs_reflectivity;
  setup.pbs_extinction = sc.station.pbs_extinction;
  setup.window = {window_ps, sc.station.detector_jitter_sigma_ps};
  return setup;
}

std::vector<std::array<DetectionChannel, 2>> class_patterns(const BsmStation& st,
                                                            BellLabel herald) {
  const auto& idx = (herald == BellLabel::PsiMinus) ? st.psi_minus_patterns
                                                    : st.psi_plus_patterns;
  std::vector<std::array<DetectionChannel, 2>> out;
  for (const auto& p : idx) out.push_back({st.detectors[p[0]], st.detectors[p[1]]});
  return out;
}

Matrix4c herald_class_matrix(const SwapScenario& sc, BellLabel herald, double window_ps,
                             const SwapEngineOptions& opts) {
  if (herald != BellLabel::PsiMinus && herald != BellLabel::PsiPlus) {
    throw_invalid("only the Psi heralds are distinguishable by the linear-optics BSM");
  }
  const EngineSetup setup = make_setup(sc, window_ps, opts);
  PatternAccumulator acc(setup);
  for (const auto& pattern : class_patterns(sc.station, herald)) {
    acc.add_split(pattern[0], pattern[1]);
  }
  return acc.matrix();
}

}  // namespace

HeraldedState swapped_state_analytic(const SwapScenario& scenario, BellLabel herald,
                                     double window_ps, const SwapEngineOptions& opts) {
  const Matrix4c m = herald_class_matrix(scenario, herald, window_ps, opts);
  const double weight = m.trace().real();
  if (weight <= 0.0) throw_physics("herald pattern has zero acceptance for this window");
  Matrix4c rho = m / weight;
  rho = 0.5 * (rho + rho.adjoint());
  HeraldedState out{DensityMatrix2Q::make(rho), 0.0, weight};
  out.fef = fully_entangled_fraction(out.rho);
  return out;
}

DensityMatrix2Q unheralded_state(const SwapScenario& scenario, const SwapEngineOptions& opts) {
  const EngineSetup setup = make_setup(scenario, kInf, opts);
  PatternAccumulator acc(setup);
  const auto& det = scenario.station.detectors;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) acc.add_split(det[i], det[j]);
    acc.add_double(det[i]);
  }
  Matrix4c rho = acc.matrix() / acc.weight();
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix2Q::make(rho);
}

double bsm_outcome_probability_total(const SwapScenario& scenario) {
  SwapEngineOptions opts;
  opts.allow_detuned = true;
  const EngineSetup setup = make_setup(scenario, kInf, opts);
  PatternAccumulator acc(setup);
  const auto& det = scenario.station.detectors;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) acc.add_split(det[i], det[j]);
    acc.add_double(det[i]);
  }
  return acc.weight();
}

std::vector<FidelityWindowRow> fidelity_vs_window(const SwapScenario& scenario,
                                                  const RateBudgetInputs& budget_inputs,
                                                  const SwapEngineOptions& opts) {
  const RateBudget budget = rate_budget(budget_inputs);

  SwapEngineOptions corrected = opts;
  corrected.corrected = true;

  // Full-window herald weight normalizes the window acceptance fraction.
  const double full_weight =
      swapped_state_analytic(scenario, BellLabel::PsiMinus, kInf, opts).herald_probability +
      swapped_state_analytic(scenario, BellLabel::PsiPlus, kInf, opts).herald_probability;

  std::vector<FidelityWindowRow> rows;
  rows.reserve(scenario.windows_ps.size());
  for (double window : scenario.windows_ps) {
    const HeraldedState minus = swapped_state_analytic(scenario, BellLabel::PsiMinus, window, opts);
    const HeraldedState plus = swapped_state_analytic(scenario, BellLabel::PsiPlus, window, opts);
    const HeraldedState minus_c =
        swapped_state_analytic(scenario, BellLabel::PsiMinus, window, corrected);
    const HeraldedState plus_c =
        swapped_state_analytic(scenario, BellLabel::PsiPlus, window, corrected);

    FidelityWindowRow row;
    row.window_ps = window;
    row.f_psi_minus = minus.fef;
    row.f_psi_plus = plus.fef;
    row.f_corrected_psi_minus = minus_c.fef;
    row.f_corrected_psi_plus = plus_c.fef;
    row.herald_probability = minus.herald_probability + plus.herald_probability;
    const double acceptance = row.herald_probability / full_weight;
    row.rate_hz = budget.fourfold_rate_hz * acceptance;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace qdswap
