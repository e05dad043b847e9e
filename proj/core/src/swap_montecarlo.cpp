#include "qdswap/swap/swap_montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "qdswap/common/constants.hpp"
#include "qdswap/common/error.hpp"
#include "qdswap/common/rng.hpp"

namespace qdswap {

namespace {

using C = std::complex<double>;

struct McSourceParams {
  double t_xx, t_x;
  double fss_rad;
  double delta_rad;  // tuned central detuning of the interfering line
  double noise_eps;
  double cauchy_gamma;  // spectral diffusion half width, rad/ps
};

struct McSetup {
  McSourceParams src[2];
  Transition bsm;
  double reflectivity;
  double pbs_extinction;
  double jitter_sigma;
  std::vector<double> windows;
  const BsmStation* station;
};

// Conditional single-photon wavepacket of the interfering photon, given the
// partner detection time of its own cascade.
struct ShotPhoton {
  bool noisy = false;
  Pol classical_pol = Pol::H;  // BSM-photon polarization of a noise photon
  Pol kept_pol = Pol::H;       // kept polarization of a noise photon
  // envelope
  bool truncated = false;  // XX photon given the X time: truncated exponential
  double start = 0.0;      // exponential start (bsm = X case)
  double end = 0.0;        // truncation end (bsm = XX case)
  double rate = 0.0;       // envelope intensity decay rate
  double norm = 0.0;       // amplitude normalization
  double sample_time = 0.0;  // the kinetics-sampled detection time
  // polarization-dependent phases
  double omega_h = 0.0, omega_v = 0.0;  // rad/ps
  double phase_v = 0.0;                 // onset phase of the V component

  C amplitude(double t, Pol p) const {
    double env;
    if (truncated) {
      if (t < 0.0 || t > end) return {0.0, 0.0};
      env = norm * std::exp(-0.5 * rate * t);
    } else {
      if (t < start) return {0.0, 0.0};
      env = norm * std::exp(-0.5 * rate * (t - start));
    }
    const double omega = (p == Pol::H) ? omega_h : omega_v;
    const double phase = -omega * t + ((p == Pol::V) ? phase_v : 0.0);
    return std::polar(env, phase);
  }
};

ShotPhoton sample_photon(const McSourceParams& sp, Transition bsm, Rng& rng) {
  ShotPhoton ph;
  const double x = rng.exponential(sp.t_xx);       // XX detection time
  const double y = x + rng.exponential(sp.t_x);    // X detection time

  ph.noisy = rng.bernoulli(sp.noise_eps);
  if (ph.noisy) {
    ph.classical_pol = rng.bernoulli(0.5) ? Pol::H : Pol::V;
    ph.kept_pol = rng.bernoulli(0.5) ? Pol::H : Pol::V;
  }

  const double nu = (sp.cauchy_gamma > 0.0 && !ph.noisy) ? rng.cauchy(sp.cauchy_gamma) : 0.0;
  const double base = sp.delta_rad + nu;
  const double half_split = 0.5 * sp.fss_rad;

  if (bsm == Transition::X) {
    ph.truncated = false;
    ph.start = x;
    ph.rate = 1.0 / sp.t_x;
    ph.norm = std::sqrt(1.0 / sp.t_x);
    ph.sample_time = y;
    ph.omega_h = base + half_split;
    ph.omega_v = base - half_split;
    // V/H relative phase must vanish at the XX detection time.
    ph.phase_v = -sp.fss_rad * x;
  } else {
    // XX photon given the X detection at y: truncated exponential on [0, y].
    const double b = 1.0 / sp.t_xx - 1.0 / sp.t_x;
    ph.truncated = true;
    ph.end = y;
    ph.rate = b;
    double mass;
    if (std::abs(b) < 1e-12) {
      mass = y;
    } else {
      mass = (1.0 - std::exp(-b * y)) / b;
    }
    ph.norm = std::sqrt(1.0 / mass);
    ph.sample_time = x;  // the kinetics sample already follows the truncated law
    ph.omega_h = base - half_split;
    ph.omega_v = base + half_split;
    ph.phase_v = sp.fss_rad * y;
  }
  return ph;
}

double bs_amp(double reflectivity, BsPort port, int source) {
  const double r = std::sqrt(reflectivity);
  const double t = std::sqrt(1.0 - reflectivity);
  if (port == BsPort::One) return source == 0 ? r : t;
  return source == 0 ? t : -r;
}

struct Outcome {
  double weight = 0.0;
  Vector4c kept = Vector4c::Zero();  // amplitude vector when coherent, else projector diag
  bool coherent = false;
  Matrix4c kept_mix = Matrix4c::Zero();  // used for incoherent outcomes
  int det_a = 0, det_b = 0;
  double time_a = 0.0, time_b = 0.0;
};

// Kept-pair amplitude for one (pattern, assignment, true-pol) outcome when
// both photons are clean: the two source-to-channel alternatives interfere.
Vector4c coherent_kept(const ShotPhoton& p1, const ShotPhoton& p2, double w1, double w2, Pol r,
                       Pol s, double t_a, double t_b) {
  Vector4c kept = Vector4c::Zero();
  const C a1 = 0.5 * w1 * p1.amplitude(t_a, r) * p2.amplitude(t_b, s);
  const C a2 = 0.5 * w2 * p1.amplitude(t_b, s) * p2.amplitude(t_a, r);
  const int ri = (r == Pol::H) ? 0 : 1;
  const int si = (s == Pol::H) ? 0 : 1;
  kept(2 * ri + si) += a1;
  kept(2 * si + ri) += a2;
  return kept;
}

}  // namespace

MonteCarloResult swapped_state_montecarlo(const SwapScenario& scenario, BellLabel herald,
                                          double window_ps, std::uint64_t n_shots,
                                          std::uint64_t seed, const MonteCarloOptions& opts) {
  if (herald != BellLabel::PsiMinus && herald != BellLabel::PsiPlus) {
    throw_invalid("only the Psi heralds are distinguishable by the linear-optics BSM");
  }
  if (n_shots < 100000) throw_invalid("Monte Carlo requires at least 1e5 shots");
  scenario.validate();
  if (scenario.is_detuned() && !opts.allow_detuned) {
    throw_physics("scenario is detuned: the interfering lines do not match within tolerance");
  }

  McSetup setup;
  const double t_deph = scenario.noise.dephasing_time_ps(scenario.bsm_photon);
  const double gamma = std::isfinite(t_deph) ? 1.0 / t_deph : 0.0;
  setup.src[0] = {scenario.source1.xx_lifetime_ps, scenario.source1.x_lifetime_ps,
                  scenario.source1.fss_ueV / kHbarUeVPs, 0.0,
                  source_noise_weight(scenario.source1, scenario.noise.noise_floor_scale), gamma};
  setup.src[1] = {scenario.source2.xx_lifetime_ps, scenario.source2.x_lifetime_ps,
                  scenario.source2.fss_ueV / kHbarUeVPs,
                  scenario.bsm_detuning_ueV() / kHbarUeVPs,
                  source_noise_weight(scenario.source2, scenario.noise.noise_floor_scale), gamma};
  setup.bsm = scenario.bsm_photon;
  setup.reflectivity = scenario.station.bs_reflectivity;
  setup.pbs_extinction = scenario.station.pbs_extinction;
  setup.jitter_sigma = scenario.station.detector_jitter_sigma_ps;
  setup.station = &scenario.station;

  constexpr int kShards = 256;
  struct ShardAccum {
    Matrix4c m = Matrix4c::Zero();
    std::uint64_t count = 0;
  };
  std::vector<ShardAccum> shards(kShards);

  auto run_shard = [&](int shard) {
    Rng rng(seed, static_cast<std::uint64_t>(shard));
    const std::uint64_t base = n_shots / kShards;
    const std::uint64_t extra = (static_cast<std::uint64_t>(shard) < n_shots % kShards) ? 1 : 0;
    const std::uint64_t count = base + extra;
    ShardAccum& acc = shards[shard];

    std::vector<Outcome> outcomes;
    outcomes.reserve(64);

    for (std::uint64_t it = 0; it < count; ++it) {
      const ShotPhoton p1 = sample_photon(setup.src[0], setup.bsm, rng);
      const ShotPhoton p2 = sample_photon(setup.src[1], setup.bsm, rng);
      const double t1 = p1.sample_time;
      const double t2 = p2.sample_time;
      const bool interfere = !p1.noisy && !p2.noisy;

      outcomes.clear();
      double total = 0.0;

      auto add_outcome = [&](int da, int db, double ta, double tb, Pol r, Pol s,
                             double leak_weight, double w1, double w2) {
        if (leak_weight == 0.0) return;
        Outcome oc;
        oc.det_a = da;
        oc.det_b = db;
        oc.time_a = ta;
        oc.time_b = tb;
        if (interfere) {
          // For a same-channel double click both alternatives carry the same
          // beam-splitter weight, handled by w2 == w1 at the call site.
          const Vector4c kept = coherent_kept(p1, p2, w1, w2, r, s, ta, tb);
          const double w = leak_weight * kept.squaredNorm();
          if (w <= 0.0) return;
          oc.weight = w;
          oc.coherent = true;
          oc.kept = kept;
        } else {
          // Distinguishable photons: the two source-to-channel alternatives
          // are separate classical outcomes.
          auto amp2 = [](const ShotPhoton& ph, double t, Pol p) {
            if (ph.noisy && p != ph.classical_pol) return 0.0;
            const double scale = ph.noisy ? 1.0 : 0.5;  // |1/sqrt2|^2 per clean pol
            const C a = ph.amplitude(t, ph.noisy ? ph.classical_pol : p);
            return scale * std::norm(a);
          };
          const double pr1 = w1 * w1 * amp2(p1, ta, r) * amp2(p2, tb, s);
          const double pr2 = w2 * w2 * amp2(p1, tb, s) * amp2(p2, ta, r);
          const double w = leak_weight * (pr1 + pr2);
          if (w <= 0.0) return;
          oc.weight = w;
          oc.coherent = false;
          oc.kept_mix = Matrix4c::Zero();
          const int k1a = p1.noisy ? ((p1.kept_pol == Pol::H) ? 0 : 1) : ((r == Pol::H) ? 0 : 1);
          const int k2a = p2.noisy ? ((p2.kept_pol == Pol::H) ? 0 : 1) : ((s == Pol::H) ? 0 : 1);
          const int idx_a = 2 * k1a + k2a;
          const int k1b = p1.noisy ? ((p1.kept_pol == Pol::H) ? 0 : 1) : ((s == Pol::H) ? 0 : 1);
          const int k2b = p2.noisy ? ((p2.kept_pol == Pol::H) ? 0 : 1) : ((r == Pol::H) ? 0 : 1);
          const int idx_b = 2 * k1b + k2b;
          oc.kept_mix(idx_a, idx_a) += pr1 * leak_weight;
          oc.kept_mix(idx_b, idx_b) += pr2 * leak_weight;
        }
        total += oc.weight;
        outcomes.push_back(oc);
      };

      const auto& det = setup.station->detectors;
      const double eps = setup.pbs_extinction;
      auto leak = [eps](Pol truth, Pol label) { return truth == label ? 1.0 - eps : eps; };

      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          const double w1 =
              bs_amp(setup.reflectivity, det[i].port, 0) * bs_amp(setup.reflectivity, det[j].port, 1);
          const double w2 =
              bs_amp(setup.reflectivity, det[j].port, 0) * bs_amp(setup.reflectivity, det[i].port, 1);
          for (Pol r : {Pol::H, Pol::V}) {
            for (Pol s : {Pol::H, Pol::V}) {
              const double lw = leak(r, det[i].pol) * leak(s, det[j].pol);
              // Both time assignments are distinct physical outcomes.
              add_outcome(i, j, t1, t2, r, s, lw, w1, w2);
              add_outcome(i, j, t2, t1, r, s, lw, w1, w2);
            }
          }
        }
        // Same-detector double clicks (never herald, but they carry weight).
        const double wd =
            bs_amp(setup.reflectivity, det[i].port, 0) * bs_amp(setup.reflectivity, det[i].port, 1);
        for (Pol r : {Pol::H, Pol::V}) {
          for (Pol s : {Pol::H, Pol::V}) {
            const double lw = leak(r, det[i].pol) * leak(s, det[i].pol);
            add_outcome(i, i, t1, t2, r, s, lw, wd, wd);
          }
        }
      }

      if (total <= 0.0) continue;

      // Sample the outcome.
      double pick = rng.uniform() * total;
      const Outcome* chosen = &outcomes.back();
      for (const auto& oc : outcomes) {
        pick -= oc.weight;
        if (pick <= 0.0) {
          chosen = &oc;
          break;
        }
      }

      if (chosen->det_a == chosen->det_b) continue;  // double click, no herald
      const auto label = setup.station->classify_pattern(chosen->det_a, chosen->det_b);
      if (!label || *label != herald) continue;

      double ta = chosen->time_a;
      double tb = chosen->time_b;
      if (setup.jitter_sigma > 0.0) {
        ta += setup.jitter_sigma * rng.normal();
        tb += setup.jitter_sigma * rng.normal();
      }
      if (std::isfinite(window_ps) && std::abs(ta - tb) > window_ps) continue;

      if (chosen->coherent) {
        const double n2 = chosen->kept.squaredNorm();
        acc.m += chosen->kept * chosen->kept.adjoint() / n2;
      } else {
        acc.m += chosen->kept_mix / chosen->kept_mix.trace().real();
      }
      ++acc.count;
    }
  };

  const int n_threads = std::max(1, opts.threads);
  if (n_threads == 1) {
    for (int s = 0; s < kShards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&]() {
        for (;;) {
          const int s = next.fetch_add(1);
          if (s >= kShards) return;
          run_shard(s);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  Matrix4c m = Matrix4c::Zero();
  std::uint64_t herald_count = 0;
  for (const auto& s : shards) {
    m += s.m;
    herald_count += s.count;
  }
  if (herald_count == 0) {
    throw_insufficient("no heralded events inside the post-selection window");
  }

  Matrix4c rho = m / static_cast<double>(herald_count);
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  MonteCarloResult out{DensityMatrix2Q::make(rho), herald_count, n_shots, 0.0, 0.0};
  out.fef = fully_entangled_fraction(out.rho);
  out.herald_probability = static_cast<double>(herald_count) / static_cast<double>(n_shots);
  return out;
}

}  // namespace qdswap
