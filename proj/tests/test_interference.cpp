#include <doctest.h>

#include "qdswap/common/error.hpp"

#include <cmath>

#include "qdswap/interference/bsm.hpp"
#include "qdswap/interference/hom.hpp"

using namespace qdswap;

namespace {

PhotonWavepacket plain_exponential(double lifetime, double offset = 0.0) {
  PhotonWavepacket wp;
  wp.decay_ps = lifetime;
  wp.origin_offset_ps = offset;
  return wp;
}

// 2D grid integration of a coincidence density (the brute-force oracle).
double grid_integral(const HomCoincidenceDensity& density, double t_max, int n) {
  const double h = t_max / n;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      total += density((i + 0.5) * h, (j + 0.5) * h);
    }
  }
  return total * h * h;
}

}  // namespace

TEST_CASE("emission densities integrate to one") {
  QdSource src;
  src.x_lifetime_ps = 25.0;
  src.xx_lifetime_ps = 16.0;
  for (const PhotonWavepacket& wp :
       {plain_exponential(20.0), plain_exponential(20.0, 12.0),
        PhotonWavepacket::x_photon(src, 0.0, 100.0),
        PhotonWavepacket::xx_photon(src, 0.0, 100.0)}) {
    double mass = 0.0;
    const double h = 0.01;
    for (double t = 0.0; t < 600.0; t += h) mass += wavepacket_intensity(wp, t) * h;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-3));
  }

  PhotonWavepacket bad = plain_exponential(-1.0);
  CHECK_THROWS_AS(bad.validate(), Error);
  PhotonWavepacket bad2 = plain_exponential(10.0);
  bad2.dephasing_time_ps = 0.0;
  CHECK_THROWS_AS(bad2.validate(), Error);
}

TEST_CASE("parallel density vanishes on the diagonal for identical wavepackets") {
  const PhotonWavepacket wp = plain_exponential(20.0);
  const HomCoincidenceDensity par(wp, wp, 0.0, HomConfig::Parallel);
  for (double t : {0.5, 3.0, 17.0, 55.0}) {
    CHECK(par(t, t) == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("orthogonal density carries no detuning dependence") {
  const PhotonWavepacket wp1 = plain_exponential(20.0);
  const PhotonWavepacket wp2 = plain_exponential(28.0);
  const HomCoincidenceDensity a(wp1, wp2, 0.0, HomConfig::Orthogonal);
  const HomCoincidenceDensity b(wp1, wp2, 250.0, HomConfig::Orthogonal);
  for (double t1 : {1.0, 9.0, 40.0}) {
    for (double t2 : {2.0, 11.0, 33.0}) {
      CHECK(a(t1, t2) == doctest::Approx(b(t1, t2)).epsilon(1e-12));
    }
  }
}

TEST_CASE("parallel never exceeds orthogonal on the diagonal at zero detuning") {
  PhotonWavepacket wp1 = plain_exponential(20.0);
  wp1.onset_smear_ps = 16.0;
  PhotonWavepacket wp2 = plain_exponential(25.0);
  const HomCoincidenceDensity par(wp1, wp2, 0.0, HomConfig::Parallel);
  const HomCoincidenceDensity orth(wp1, wp2, 0.0, HomConfig::Orthogonal);
  for (double t : {0.5, 5.0, 20.0, 44.0, 90.0}) {
    CHECK(par(t, t) <= orth(t, t) + 1e-14);
  }
}

TEST_CASE("each configuration integrates to the pairwise coincidence probability") {
  const PhotonWavepacket wp1 = plain_exponential(12.0);
  const PhotonWavepacket wp2 = plain_exponential(12.0, 8.0);
  const HomCoincidenceDensity par(wp1, wp2, 0.0, HomConfig::Parallel);
  const HomCoincidenceDensity orth(wp1, wp2, 0.0, HomConfig::Orthogonal);
  // Cross-port coincidences of a balanced splitter absorb 1/2 of the pairs
  // when the photons are distinguishable.
  CHECK(grid_integral(orth, 150.0, 600) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(grid_integral(par, 150.0, 600) <= 0.5);
}

TEST_CASE("full-window visibility against the 2D grid oracle") {
  // Identical exponentials: complete suppression, V = 1.
  {
    const PhotonWavepacket wp = plain_exponential(25.0);
    const HomCoincidenceDensity par(wp, wp, 0.0, HomConfig::Parallel);
    const HomCoincidenceDensity orth(wp, wp, 0.0, HomConfig::Orthogonal);
    const double c_par = grid_integral(par, 300.0, 2000);
    const double c_orth = grid_integral(orth, 300.0, 2000);
    const double v_grid = 1.0 - c_par / c_orth;

    HomSimulationOptions opts;
    opts.bin_width_ps = 1.0;
    opts.range_ps = 300.0;
    const auto h_par = simulate_hom_histogram(wp, wp, 0.0, HomConfig::Parallel, opts);
    const auto h_orth = simulate_hom_histogram(wp, wp, 0.0, HomConfig::Orthogonal, opts);
    const double v_analytic = hom_visibility(h_par, h_orth, 300.0);

    CHECK(std::abs(v_grid - v_analytic) < 1e-4);
    CHECK(v_analytic == doctest::Approx(1.0).epsilon(1e-6));
  }

  // Offset wavepackets: partial overlap, nontrivial visibility. The grid
  // step divides the 10 ps offset so the envelope kink sits on cell edges.
  {
    const PhotonWavepacket wp1 = plain_exponential(25.0);
    const PhotonWavepacket wp2 = plain_exponential(25.0, 10.0);
    const HomCoincidenceDensity par(wp1, wp2, 0.0, HomConfig::Parallel);
    const HomCoincidenceDensity orth(wp1, wp2, 0.0, HomConfig::Orthogonal);
    const double v_grid =
        1.0 - grid_integral(par, 350.0, 3500) / grid_integral(orth, 350.0, 3500);

    HomSimulationOptions opts;
    opts.bin_width_ps = 0.5;
    opts.range_ps = 350.0;
    const auto h_par = simulate_hom_histogram(wp1, wp2, 0.0, HomConfig::Parallel, opts);
    const auto h_orth = simulate_hom_histogram(wp1, wp2, 0.0, HomConfig::Orthogonal, opts);
    const double v_analytic = hom_visibility(h_par, h_orth, 350.0);

    // Overlap of the two shifted exponential modes: V = exp(-offset/T).
    CHECK(v_analytic == doctest::Approx(std::exp(-10.0 / 25.0)).epsilon(1e-5));
    CHECK(std::abs(v_grid - v_analytic) < 1e-4);
  }
}

TEST_CASE("visibility window behaviour on simulated cascade photons") {
  QdSource src;
  src.x_lifetime_ps = 25.0;
  src.xx_lifetime_ps = 16.0;
  const PhotonWavepacket wp1 = PhotonWavepacket::x_photon(src, 0.0, 80.0);
  const PhotonWavepacket wp2 = PhotonWavepacket::x_photon(src, 0.0, 80.0);

  HomSimulationOptions opts;
  opts.jitter_sigma_ps = 6.37;
  opts.bin_width_ps = 2.0;
  opts.range_ps = 400.0;
  const auto par = simulate_hom_histogram(wp1, wp2, 0.0, HomConfig::Parallel, opts);
  const auto orth = simulate_hom_histogram(wp1, wp2, 0.0, HomConfig::Orthogonal, opts);

  // Nonincreasing visibility with window size.
  double prev = 1.0;
  for (double window : {6.0, 10.0, 20.0, 40.0, 80.0, 160.0, 400.0}) {
    const double v = hom_visibility(par, orth, window);
    CHECK(v <= prev + 1e-9);
    prev = v;
  }

  // Swapping the input wavepackets leaves the visibility unchanged.
  PhotonWavepacket wp2b = wp2;
  wp2b.decay_ps = 30.0;
  const auto par_ab = simulate_hom_histogram(wp1, wp2b, 0.0, HomConfig::Parallel, opts);
  const auto orth_ab = simulate_hom_histogram(wp1, wp2b, 0.0, HomConfig::Orthogonal, opts);
  const auto par_ba = simulate_hom_histogram(wp2b, wp1, 0.0, HomConfig::Parallel, opts);
  const auto orth_ba = simulate_hom_histogram(wp2b, wp1, 0.0, HomConfig::Orthogonal, opts);
  CHECK(hom_visibility(par_ab, orth_ab, 50.0) ==
        doctest::Approx(hom_visibility(par_ba, orth_ba, 50.0)).epsilon(1e-6));

  // Large detuning with finite jitter kills the full-window visibility.
  const auto par_det = simulate_hom_histogram(wp1, wp2, 2.0e4, HomConfig::Parallel, opts);
  const auto orth_det = simulate_hom_histogram(wp1, wp2, 2.0e4, HomConfig::Orthogonal, opts);
  CHECK(std::abs(hom_visibility(par_det, orth_det, 400.0)) < 0.01);
}

TEST_CASE("hom_visibility error paths") {
  const PhotonWavepacket wp = plain_exponential(20.0);
  HomSimulationOptions opts;
  opts.bin_width_ps = 2.0;
  opts.range_ps = 100.0;
  const auto par = simulate_hom_histogram(wp, wp, 0.0, HomConfig::Parallel, opts);
  auto orth = simulate_hom_histogram(wp, wp, 0.0, HomConfig::Orthogonal, opts);
  CHECK_THROWS_AS(hom_visibility(par, orth, 1.0), Error);  // window below one bin
  for (auto& c : orth.counts) c = 0.0;
  CHECK_THROWS_AS(hom_visibility(par, orth, 20.0), Error);  // zero orthogonal counts
}

TEST_CASE("corrected visibility calibration and clamps") {
  CHECK(corrected_visibility(0.43, 0.0, 0.0) == doctest::Approx(0.43));
  // Summed g2 of 0.05 lifts the calibrated pairs: 0.43 -> 0.48, 0.46 -> 0.51.
  CHECK(corrected_visibility(0.43, 0.05, 0.0) == doctest::Approx(0.48));
  CHECK(corrected_visibility(0.46, 0.05, 0.0) == doctest::Approx(0.51));
  // Never beyond unity.
  CHECK(corrected_visibility(1.0, 0.0, 0.0) == doctest::Approx(1.0));
  CHECK(corrected_visibility(0.99, 0.1, 0.0) == doctest::Approx(1.0));
  // Corrections only increase the raw value.
  CHECK(corrected_visibility(0.5, 0.0, 0.1) > 0.5);
  CHECK(corrected_visibility(0.5, 0.02, 0.0) > 0.5);
}

TEST_CASE("bsm herald classification") {
  BsmStation station = BsmStation::ideal();
  station.validate();

  // Main-text patterns: AB and CD herald PsiMinus, AC and BD PsiPlus.
  CHECK(bsm_herald(station, {{'A', 0.0}, {'B', 3.0}}, 10.0) == BellLabel::PsiMinus);
  CHECK(bsm_herald(station, {{'C', 0.0}, {'D', 3.0}}, 10.0) == BellLabel::PsiMinus);
  CHECK(bsm_herald(station, {{'A', 0.0}, {'C', 3.0}}, 10.0) == BellLabel::PsiPlus);
  CHECK(bsm_herald(station, {{'B', 0.0}, {'D', 3.0}}, 10.0) == BellLabel::PsiPlus);

  // Same-polarization patterns never herald.
  CHECK(!bsm_herald(station, {{'A', 0.0}, {'D', 1.0}}, 10.0).has_value());
  CHECK(!bsm_herald(station, {{'B', 0.0}, {'C', 1.0}}, 10.0).has_value());

  // Outside the window.
  CHECK(!bsm_herald(station, {{'A', 0.0}, {'B', 11.0}}, 10.0).has_value());

  // Not exactly two detections.
  CHECK(!bsm_herald(station, {{'A', 0.0}}, 10.0).has_value());
  CHECK(!bsm_herald(station, {{'A', 0.0}, {'B', 1.0}, {'C', 2.0}}, 10.0).has_value());

  // Unknown detector label is an error.
  CHECK_THROWS_AS(bsm_herald(station, {{'E', 0.0}, {'B', 1.0}}, 10.0), Error);

  // Every heralding pattern pairs one H with one V output.
  for (const auto& patterns : {station.psi_minus_patterns, station.psi_plus_patterns}) {
    for (const auto& p : patterns) {
      CHECK(station.detectors[p[0]].pol != station.detectors[p[1]].pol);
    }
  }

  // A same-polarization herald pattern is rejected at validation.
  BsmStation bad = station;
  bad.psi_minus_patterns = {{0, 3}};  // A and D are both H outputs
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("apply_jitter statistics") {
  std::vector<double> times(1000000, 0.0);
  const auto same = apply_jitter(times, 0.0, 5);
  CHECK(same == times);

  const double sigma = 6.37;
  const auto jittered = apply_jitter(times, sigma, 5);
  double mean = 0.0;
  for (double t : jittered) mean += t;
  mean /= jittered.size();
  double var = 0.0;
  for (double t : jittered) var += (t - mean) * (t - mean);
  var /= (jittered.size() - 1);

  CHECK(std::abs(mean) < 3.0 * sigma / std::sqrt(static_cast<double>(times.size())));
  CHECK(std::sqrt(var) == doctest::Approx(sigma).epsilon(0.02));

  // Deterministic given the seed.
  CHECK(apply_jitter(times, sigma, 5) == jittered);
}
