#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "spdcfilm/dispersion.hpp"

namespace spdc {

struct PumpBeam {
  double lambda_nm = 775.0;   // vacuum wavelength
  double waist = 10e-6;       // 1/e^2 field waist radius, meters
  double power_w = 40e-3;     // watts
  double theta = 0.0;         // polarization angle from the armchair axis, rad
};

/// Signed in-plane emission angle, measured from the forward pump axis.
struct EmissionDirection {
  double theta = 0.0;  // normalized to (-pi, pi]
  static EmissionDirection from(double raw);
  bool forward() const { return theta > -1.5707963267948966 && theta < 1.5707963267948966; }
};

struct DetectionWindow {
  double center = 0.0;          // 0 (forward) or pi (backward)
  double full_width = 0.2;      // rad
  std::array<double, 2> band_nm{1460.0, 1650.0};
};

struct Mismatch {
  double parallel = 0.0;  // rad/m, along the pump axis
  double perp = 0.0;      // rad/m, transverse
};

/// Longitudinal and transverse wavevector mismatch for a signal photon at
/// omega_s emitted at theta_s with the idler at theta_i (energy conservation
/// fixes omega_i). The pump wavevector is purely longitudinal.
Mismatch mismatch(const NonlinearFilm& film, const PumpBeam& pump,
                  double omega_s, double theta_s, double theta_i);

/// sinc^2 phase-matching factor of a film of thickness `length`.
/// The argument is dk_par * length, calibrated against the multilayer
/// forward-bias anchors (counter/co ratio < 0.25 at 173 nm for GaSe).
double phase_matching_factor(double dk_par, double length);

/// Gaussian transverse pump constraint exp(-(dk_perp w0)^2 / 2).
double pump_factor(double dk_perp, double waist);

/// Thin-film pair-emission rate density chi2^2 L^2 Fpm Fp, arbitrary units
/// (global proportionality constant fixed to 1).
double pair_rate_density(const NonlinearFilm& film, const PumpBeam& pump,
                         double omega_s, double theta_s, double theta_i);

struct Grid2D {
  std::vector<double> omega_axis;  // rad/s, strictly increasing
  std::vector<double> theta_axis;  // rad, strictly increasing
  std::vector<double> values;      // row-major [omega][theta]
  double& at(std::size_t i, std::size_t j) { return values[i * theta_axis.size() + j]; }
  double at(std::size_t i, std::size_t j) const { return values[i * theta_axis.size() + j]; }
};

struct JointRateGrid {
  std::vector<double> omega_s_axis;
  std::vector<double> theta_s_axis;
  std::vector<double> theta_i_axis;
  std::vector<double> values;  // [omega][theta_s][theta_i]
  double at(std::size_t i, std::size_t j, std::size_t k) const {
    return values[(i * theta_s_axis.size() + j) * theta_i_axis.size() + k];
  }
};

JointRateGrid sample_joint_grid(const NonlinearFilm& film, const PumpBeam& pump,
                                const std::vector<double>& omega_s_axis,
                                const std::vector<double>& theta_s_axis,
                                const std::vector<double>& theta_i_axis);

/// S(omega_s, theta_s): marginal of the rate density over the idler angle on
/// the full circle (midpoint rule, n_theta_i samples).
Grid2D frequency_angular_spectrum(const NonlinearFilm& film, const PumpBeam& pump,
                                  const std::vector<double>& omega_axis,
                                  const std::vector<double>& theta_axis,
                                  std::size_t n_theta_i = 720);

struct AngularProfiles {
  std::vector<double> theta_axis;
  std::vector<double> signal;  // normalized so max = 1
  std::vector<double> idler;
};

/// Signal/idler angular emission profiles integrated over a wavelength band
/// (the band selects the photon whose profile is being built).
AngularProfiles angular_emission_profile(const NonlinearFilm& film,
                                         const PumpBeam& pump,
                                         const std::array<double, 2>& band_nm,
                                         std::size_t n_theta = 720,
                                         std::size_t n_omega = 257);

struct ScenarioRates {
  double ff = 0.0;  // signal forward, idler forward
  double fb = 0.0;  // signal forward, idler backward
  double bf = 0.0;
  double bb = 0.0;
};

struct ScenarioGrid {
  std::size_t n_omega = 257;
  std::size_t n_theta = 129;  // per detection box
};

/// Band-and-box integrated pair rates for the four propagation scenarios.
ScenarioRates scenario_rates(const NonlinearFilm& film, const PumpBeam& pump,
                             const DetectionWindow& forward_window,
                             const DetectionWindow& backward_window,
                             const ScenarioGrid& grid = {});

/// (r_fb + r_bf) / r_ff; +inf when r_ff == 0.
double counter_to_co_ratio(const ScenarioRates& rates);

struct BandwidthOptions {
  double span_thz = 290.0;   // full frequency span centered on degeneracy
  std::size_t n_nu = 581;    // spectral samples
  std::size_t n_q = 160;     // transverse-wavevector samples per photon
};

struct BandwidthResult {
  double fwhm_thz = 0.0;
  double lambda_span_nm = 0.0;     // wavelength extent of the half-max region
  double nu_lo_thz = 0.0;          // half-max crossings
  double nu_hi_thz = 0.0;
  std::vector<double> nu_thz;      // sampled spectrum, normalized at degeneracy
  std::vector<double> density;
};

/// Detected coincidence spectrum for a collinear collection-cone pair of
/// half-angle collection_full_width/2, weighted by the per-photon spectral
/// mode density (omega_s * omega_i)^2, normalized to 1 at the degenerate
/// frequency. Returns the FWHM about the degenerate peak; throws
/// std::runtime_error asking for a wider grid when a half-max crossing is
/// not bracketed.
BandwidthResult emission_bandwidth(const NonlinearFilm& film, const PumpBeam& pump,
                                   double collection_full_width,
                                   const BandwidthOptions& opts = {});

/// Lorentzian-profile correlation time 1 / (pi dnu), femtoseconds.
double correlation_time_fs(double bandwidth_thz);

/// In-medium collection half-angle NA / n(lambda). Requires 0 <= NA < n.
double detection_angle_from_na(const DispersionModel& model, double na,
                               double lambda_nm);

}  // namespace spdc
