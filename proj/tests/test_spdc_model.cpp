#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "spdcfilm/constants.hpp"
#include "spdcfilm/numeric.hpp"
#include "spdcfilm/spdc_model.hpp"

using namespace spdc;

namespace {

NonlinearFilm monolayer() { return NonlinearFilm{1, 1.0, DispersionModel::gase_ordinary()}; }

NonlinearFilm layers(int n) { return NonlinearFilm{n, 1.0, DispersionModel::gase_ordinary()}; }

PumpBeam pump775() { return PumpBeam{775.0, 10e-6, 40e-3, 0.0}; }

double omega_deg() { return omega_from_lambda_nm(775.0) / 2.0; }

}  // namespace

TEST_SUITE_BEGIN("spdc_model");

TEST_CASE("mismatch kinematics") {
  const auto film = monolayer();
  const auto pump = pump775();
  const double omega_p = omega_from_lambda_nm(775.0);

  SUBCASE("degenerate collinear forward has zero transverse mismatch") {
    const auto m = mismatch(film, pump, omega_deg(), 0.0, 0.0);
    CHECK(m.perp == 0.0);
  }
  SUBCASE("mirror flip negates the transverse mismatch, keeps the longitudinal") {
    const auto a = mismatch(film, pump, omega_deg() * 1.07, 0.31, -0.12);
    const auto b = mismatch(film, pump, omega_deg() * 1.07, -0.31, 0.12);
    CHECK(a.parallel == doctest::Approx(b.parallel).epsilon(1e-15));
    CHECK(a.perp == doctest::Approx(-b.perp).epsilon(1e-15));
  }
  SUBCASE("degenerate forward-backward pair leaves the full pump wavevector") {
    const auto m = mismatch(film, pump, omega_deg(), 0.0, kPi);
    const double k_p = film.dispersion.wavevector(omega_p);
    CHECK(m.parallel == doctest::Approx(k_p).epsilon(1e-14));
  }
  SUBCASE("signal at or above the pump frequency is rejected") {
    CHECK_THROWS_WITH_AS(mismatch(film, pump, omega_p, 0.0, 0.0),
                         doctest::Contains("idler frequency nonpositive"),
                         std::domain_error);
    CHECK_THROWS_AS(mismatch(film, pump, 0.0, 0.0, 0.0), std::domain_error);
  }
}

TEST_CASE("phase matching factor") {
  const double L = 0.801e-9;
  CHECK(phase_matching_factor(0.0, L) == doctest::Approx(1.0));
  // first zero of the sinc envelope
  CHECK(phase_matching_factor(2.0 * kPi / L, L) ==
        doctest::Approx(0.0).epsilon(1e-20));
  // both-backward worst case for a monolayer stays flat
  CHECK(phase_matching_factor(4.65e7, L) >= 0.999);
  CHECK_THROWS_AS(phase_matching_factor(1.0, 0.0), std::domain_error);
}

TEST_CASE("pump factor") {
  const double w0 = 10e-6;
  CHECK(pump_factor(0.0, w0) == doctest::Approx(1.0));
  CHECK(pump_factor(1.0 / w0, w0) == doctest::Approx(std::exp(-0.5)));
  CHECK(pump_factor(1e6, w0) == doctest::Approx(1.928750e-22).epsilon(1e-5));
  CHECK_THROWS_AS(pump_factor(1.0, 0.0), std::domain_error);
}

TEST_CASE("pair rate density scalings") {
  const auto pump = pump775();
  const double omega_s = omega_deg() * 1.02;

  SUBCASE("doubling thickness quadruples the rate when mismatches stay flat") {
    // monolayer vs bilayer: Fpm ~ 1 for both
    const double r1 = pair_rate_density(layers(1), pump, omega_s, 0.1, -0.1);
    const double r2 = pair_rate_density(layers(2), pump, omega_s, 0.1, -0.1);
    CHECK(r2 / r1 == doctest::Approx(4.0).epsilon(1e-5));
  }
  SUBCASE("doubling chi2 quadruples the rate") {
    auto film = monolayer();
    const double r1 = pair_rate_density(film, pump, omega_s, 0.1, -0.1);
    film.chi2 = 2.0;
    const double r2 = pair_rate_density(film, pump, omega_s, 0.1, -0.1);
    CHECK(r2 == doctest::Approx(4.0 * r1));
  }
  SUBCASE("monolayer emits equally forward and backward") {
    const double fwd = pair_rate_density(monolayer(), pump, omega_deg(), 0.0, 0.0);
    const double bwd = pair_rate_density(monolayer(), pump, omega_deg(), kPi, kPi);
    CHECK(std::abs(1.0 - bwd / fwd) < 1e-3);
  }
}

TEST_CASE("density symmetries hold over random kinematics") {
  const auto film = layers(37);
  const auto pump = pump775();
  const double omega_p = omega_from_lambda_nm(775.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> frac(0.35, 0.65);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const double omega_s = frac(rng) * omega_p;
    const double ts = ang(rng), ti = ang(rng);
    const double r = pair_rate_density(film, pump, omega_s, ts, ti);
    // signal/idler relabeling
    const double rx = pair_rate_density(film, pump, omega_p - omega_s, ti, ts);
    CHECK(r == doctest::Approx(rx).epsilon(1e-11));
    // mirror inversion
    const double rm = pair_rate_density(film, pump, omega_s, -ts, -ti);
    CHECK(r == doctest::Approx(rm).epsilon(1e-14));
  }
}

TEST_CASE("monolayer flatness: Fpm within 1e-3 of unity on the telecom grid") {
  const auto film = monolayer();
  const auto pump = pump775();
  const double omega_p = omega_from_lambda_nm(775.0);
  const double L = film.thickness();
  double worst = 0.0;
  for (double lambda_nm = 1460.0; lambda_nm <= 1650.0; lambda_nm += 5.0) {
    const double omega_s = omega_from_lambda_nm(lambda_nm);
    for (double ts : {0.0, kPi / 2.0, kPi}) {
      for (double ti : {0.0, kPi / 2.0, kPi}) {
        const auto m = mismatch(film, pump, omega_s, ts, ti);
        worst = std::max(worst, std::abs(1.0 - phase_matching_factor(m.parallel, L)));
      }
    }
  }
  CHECK(worst <= 1e-3);
  CHECK(worst > 0.0);
}

TEST_CASE("frequency-angular spectrum symmetries") {
  const auto pump = pump775();
  const auto omega_axis = linspace(omega_from_lambda_nm(1650.0),
                                   omega_from_lambda_nm(1460.0), 11);
  const auto theta_axis = circle_midpoints(72);

  SUBCASE("monolayer: forward/backward symmetric within 1 percent") {
    const auto s = frequency_angular_spectrum(monolayer(), pump, omega_axis,
                                              theta_axis, 720);
    for (std::size_t i = 0; i < omega_axis.size(); ++i) {
      for (std::size_t j = 0; j < theta_axis.size(); ++j) {
        const std::size_t j_pi = (j + theta_axis.size() / 2) % theta_axis.size();
        CHECK(s.at(i, j) == doctest::Approx(s.at(i, j_pi)).epsilon(0.01));
      }
    }
  }
  SUBCASE("mirror symmetry in the signal angle is exact on a symmetric grid") {
    const auto s = frequency_angular_spectrum(monolayer(), pump, omega_axis,
                                              theta_axis, 360);
    for (std::size_t i = 0; i < omega_axis.size(); ++i) {
      for (std::size_t j = 0; j < theta_axis.size(); ++j) {
        const std::size_t j_m = theta_axis.size() - 1 - j;
        CHECK(s.at(i, j) == doctest::Approx(s.at(i, j_m)).epsilon(1e-9));
      }
    }
  }
  SUBCASE("216 layers: emission is predominantly forward") {
    const auto s = frequency_angular_spectrum(layers(216), pump, omega_axis,
                                              theta_axis, 720);
    KahanSum fwd, bwd;
    for (std::size_t i = 0; i < omega_axis.size(); ++i) {
      for (std::size_t j = 0; j < theta_axis.size(); ++j) {
        (std::abs(theta_axis[j]) < kPi / 2.0 ? fwd : bwd).add(s.at(i, j));
      }
    }
    CHECK(bwd.value() < fwd.value());
  }
  SUBCASE("empty axes are rejected") {
    CHECK_THROWS_AS(
        frequency_angular_spectrum(monolayer(), pump, {}, theta_axis, 64),
        std::domain_error);
  }
}

TEST_CASE("angular emission profiles") {
  const auto pump = pump775();

  SUBCASE("monolayer profile is forward/backward symmetric within 1 percent") {
    const auto prof = angular_emission_profile(monolayer(), pump,
                                               {1460.0, 1650.0}, 720, 65);
    KahanSum fwd, bwd;
    for (std::size_t j = 0; j < prof.theta_axis.size(); ++j) {
      (std::abs(prof.theta_axis[j]) < kPi / 2.0 ? fwd : bwd).add(prof.signal[j]);
    }
    CHECK(std::abs(1.0 - bwd.value() / fwd.value()) < 0.01);
    const double peak = *std::max_element(prof.signal.begin(), prof.signal.end());
    CHECK(peak == doctest::Approx(1.0));
  }
  SUBCASE("degenerate-symmetric band makes signal and idler profiles match") {
    // band symmetric about 1550 nm in frequency
    const double nu_d = thz_from_omega(omega_from_lambda_nm(775.0)) / 2.0;
    const double c_nm_thz = kSpeedOfLight * 1e-3;
    const std::array<double, 2> band{c_nm_thz / (nu_d + 10.0),
                                     c_nm_thz / (nu_d - 10.0)};
    const auto prof = angular_emission_profile(monolayer(), pump, band, 360, 33);
    for (std::size_t j = 0; j < prof.theta_axis.size(); ++j) {
      CHECK(prof.signal[j] == doctest::Approx(prof.idler[j]).epsilon(1e-6));
    }
  }
  SUBCASE("216 layers: backward-to-forward signal ratio below one") {
    const auto prof = angular_emission_profile(layers(216), pump,
                                               {1460.0, 1650.0}, 720, 65);
    KahanSum fwd, bwd;
    for (std::size_t j = 0; j < prof.theta_axis.size(); ++j) {
      (std::abs(prof.theta_axis[j]) < kPi / 2.0 ? fwd : bwd).add(prof.signal[j]);
    }
    CHECK(bwd.value() / fwd.value() < 1.0);
  }
  SUBCASE("empty band is rejected") {
    CHECK_THROWS_AS(
        angular_emission_profile(monolayer(), pump, {1650.0, 1460.0}, 90, 17),
        std::domain_error);
  }
}

TEST_CASE("scenario rates and the counter-to-co ratio") {
  const auto pump = pump775();
  const DetectionWindow fwd{0.0, 0.2, {1460.0, 1650.0}};
  const DetectionWindow bwd{kPi, 0.2, {1460.0, 1650.0}};

  SUBCASE("monolayer: all four scenarios equal within 2 percent, ratio 2") {
    const auto r = scenario_rates(monolayer(), pump, fwd, bwd);
    CHECK(r.fb == doctest::Approx(r.ff).epsilon(0.02));
    CHECK(r.bf == doctest::Approx(r.ff).epsilon(0.02));
    CHECK(r.bb == doctest::Approx(r.ff).epsilon(0.02));
    CHECK(counter_to_co_ratio(r) == doctest::Approx(2.0).epsilon(0.025));
  }
  SUBCASE("fb and bf coincide by signal/idler relabeling") {
    const auto r = scenario_rates(layers(216), pump, fwd, bwd, {129, 65});
    CHECK(r.fb == doctest::Approx(r.bf).epsilon(1e-3));
  }
  SUBCASE("216 layers: backward pairs are suppressed") {
    const auto r = scenario_rates(layers(216), pump, fwd, bwd, {129, 65});
    CHECK(r.bb < r.ff);
    CHECK(counter_to_co_ratio(r) < 0.25);
  }
  SUBCASE("ratio algebra") {
    CHECK(counter_to_co_ratio({3.0, 3.0, 3.0, 3.0}) == 2.0);
    CHECK(std::isinf(counter_to_co_ratio({0.0, 1.0, 1.0, 1.0})));
    CHECK_THROWS_AS(counter_to_co_ratio({-1.0, 1.0, 1.0, 1.0}), std::domain_error);
  }
  SUBCASE("ratio invariant under chi2 rescaling") {
    auto film = layers(54);
    const double a = counter_to_co_ratio(scenario_rates(film, pump, fwd, bwd, {65, 33}));
    film.chi2 = 9.0;
    const double b = counter_to_co_ratio(scenario_rates(film, pump, fwd, bwd, {65, 33}));
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
  SUBCASE("ratio decreases with layer count") {
    double prev = 3.0;
    for (int n : {1, 27, 54, 108, 216}) {
      const double ratio =
          counter_to_co_ratio(scenario_rates(layers(n), pump, fwd, bwd, {129, 65}));
      CHECK(ratio < prev);
      prev = ratio;
    }
  }
  SUBCASE("grid refinement changes the rates by less than 1 percent") {
    const auto coarse = scenario_rates(layers(216), pump, fwd, bwd, {257, 129});
    const auto fine = scenario_rates(layers(216), pump, fwd, bwd, {513, 257});
    CHECK(coarse.ff == doctest::Approx(fine.ff).epsilon(0.01));
    CHECK(coarse.fb == doctest::Approx(fine.fb).epsilon(0.01));
    CHECK(coarse.bb == doctest::Approx(fine.bb).epsilon(0.01));
  }
}

TEST_CASE("emission bandwidth at the 0.2 rad collection") {
  const auto pump = pump775();

  SUBCASE("monolayer: about 100 THz wide, spanning about 900 nm") {
    const auto bw = emission_bandwidth(monolayer(), pump, 0.2);
    CHECK(bw.fwhm_thz == doctest::Approx(121.0).epsilon(0.01));
    CHECK(bw.lambda_span_nm == doctest::Approx(1075.0).epsilon(0.01));
    CHECK(correlation_time_fs(bw.fwhm_thz) == doctest::Approx(2.63).epsilon(0.01));
    // spectrum is normalized at degeneracy and symmetric about it
    CHECK(bw.density[bw.density.size() / 2] == doctest::Approx(1.0));
    CHECK(bw.nu_hi_thz - 193.414 == doctest::Approx(193.414 - bw.nu_lo_thz).epsilon(1e-3));
  }
  SUBCASE("grid refinement is stable below 1 percent") {
    const auto a = emission_bandwidth(monolayer(), pump, 0.2);
    BandwidthOptions fine;
    fine.n_nu = 841;
    fine.n_q = 240;
    const auto b = emission_bandwidth(monolayer(), pump, 0.2, fine);
    CHECK(a.fwhm_thz == doctest::Approx(b.fwhm_thz).epsilon(0.01));
  }
  SUBCASE("thick film: collinear mismatch shrinks toward the band edges, widening "
          "the degenerate-normalized width") {
    const auto bw = emission_bandwidth(layers(2000), pump, 0.2);
    CHECK(bw.fwhm_thz == doctest::Approx(152.0).epsilon(0.01));
  }
  SUBCASE("too narrow a span reports an actionable error") {
    BandwidthOptions narrow;
    narrow.span_thz = 20.0;
    narrow.n_nu = 41;
    CHECK_THROWS_WITH_AS(emission_bandwidth(monolayer(), pump, 0.2, narrow),
                         doctest::Contains("widen"), std::runtime_error);
  }
}

TEST_CASE("correlation time") {
  CHECK(correlation_time_fs(100.0) == doctest::Approx(3.183).epsilon(1e-3));
  CHECK(correlation_time_fs(1.0) == doctest::Approx(318.3).epsilon(1e-3));
  CHECK(correlation_time_fs(200.0) ==
        doctest::Approx(correlation_time_fs(100.0) / 2.0));
  CHECK_THROWS_AS(correlation_time_fs(0.0), std::domain_error);
}

TEST_CASE("detection angle from numerical aperture") {
  const auto m = DispersionModel::constant_index(2.8);
  CHECK(detection_angle_from_na(m, 0.56, 1550.0) == doctest::Approx(0.2));
  CHECK(detection_angle_from_na(m, 0.0, 1550.0) == 0.0);
  CHECK_THROWS_AS(detection_angle_from_na(m, 3.0, 1550.0), std::domain_error);
}

TEST_CASE("emission direction normalization") {
  CHECK(EmissionDirection::from(3.0 * kPi).theta == doctest::Approx(kPi));
  CHECK(EmissionDirection::from(-0.25).theta == doctest::Approx(-0.25));
  CHECK(EmissionDirection::from(0.3).forward());
  CHECK_FALSE(EmissionDirection::from(kPi - 0.01).forward());
}

TEST_SUITE_END();
