#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spdcfilm/dispersion.hpp"
#include "spdcfilm/photon_stats.hpp"
#include "spdcfilm/spdc_model.hpp"

namespace spdc {

/// One structured file for every physical input. Every field is validated at
/// load time; violations raise std::invalid_argument naming the field path.
struct RunConfig {
  NonlinearFilm film;
  PumpBeam pump;
  DetectionWindow forward_window{0.0, 0.2, {1460.0, 1650.0}};
  DetectionWindow backward_window{3.14159265358979323846, 0.2, {1460.0, 1650.0}};

  struct Grids {
    std::size_t n_omega = 512;
    std::size_t n_theta_s = 720;
    std::size_t n_theta_i = 720;
    std::array<double, 2> lambda_range_nm{1150.0, 2600.0};
    ScenarioGrid scenario;
    BandwidthOptions bandwidth;
  } grids;

  struct Simulation {
    SourceModel source{10.0, 200.0, 200.0};
    DetectorModel det1{0.5, 100.0, 0.3e-9};
    DetectorModel det2{0.5, 100.0, 0.3e-9};
    double duration_s = 100.0;
    double bin_width_s = 1e-9;
    double tau_max_s = 100e-9;
    std::uint64_t seed = 1;
    std::vector<double> powers_mw{5.0, 10.0, 20.0, 30.0, 40.0};
  } simulation;

  struct Tomography {
    double werner_p = 1.0;
    double mean_total = 1e5;
    std::string target = "phi-";
    bool flip_rl = false;
    double baseline_hz = 0.0;
  } tomography;

  static RunConfig defaults();
  static RunConfig from_file(const std::string& path);
  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
};

}  // namespace spdc
