// Command-line front end: every computation in the library behind one binary,
// emitting CSV grids and JSON summaries for plotting pipelines.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "spdcfilm/config.hpp"
#include "spdcfilm/constants.hpp"
#include "spdcfilm/numeric.hpp"
#include "spdcfilm/photon_stats.hpp"
#include "spdcfilm/polarization.hpp"
#include "spdcfilm/spdc_model.hpp"
#include "spdcfilm/tomography.hpp"

namespace {

using nlohmann::json;

std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string fmt_time(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct Output {
  std::filesystem::path dir = ".";
  bool json_summary = false;

  std::ofstream open(const std::string& name) const {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / name);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    return out;
  }
  void summary(const json& j) const {
    if (json_summary) {
      std::cout << j.dump() << "\n";
    } else {
      for (auto it = j.begin(); it != j.end(); ++it) {
        std::cout << it.key() << " = " << it.value().dump() << "\n";
      }
    }
  }
};

spdc::RunConfig load_config(const std::optional<std::string>& path) {
  return path ? spdc::RunConfig::from_file(*path) : spdc::RunConfig::defaults();
}

json rho_to_json(const spdc::Matrix4cd& rho) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) {
      row.push_back({rho(i, j).real(), rho(i, j).imag()});
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<spdc::MeasurementRecord> read_counts_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("counts file not found: " + path);
  std::vector<spdc::MeasurementRecord> records;
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("basis_1", 0) == 0) continue;  // header row present
    }
    std::istringstream ss(line);
    std::string b1, b2, counts, seconds;
    if (!std::getline(ss, b1, ',') || !std::getline(ss, b2, ',') ||
        !std::getline(ss, counts, ',')) {
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": expected basis_1,basis_2,counts,seconds");
    }
    std::getline(ss, seconds, ',');
    spdc::MeasurementRecord r;
    r.setting = {spdc::parse_basis(b1), spdc::parse_basis(b2)};
    r.counts = std::stoll(counts);
    if (r.counts < 0)
      throw std::invalid_argument(path + ":" + std::to_string(line_no) +
                                  ": counts must be nonnegative");
    r.acquisition_time = seconds.empty() ? 1.0 : std::stod(seconds);
    records.push_back(r);
  }
  if (records.empty()) throw std::invalid_argument(path + ": no data rows");
  return records;
}

std::vector<double> omega_axis_from_lambda_range(const std::array<double, 2>& range_nm,
                                                 std::size_t n) {
  const double w_lo = spdc::omega_from_lambda_nm(range_nm[1]);
  const double w_hi = spdc::omega_from_lambda_nm(range_nm[0]);
  return spdc::linspace(w_lo, w_hi, n);
}

int run_spectrum(const spdc::RunConfig& cfg, const Output& out, bool dump_grid) {
  const auto omega_axis =
      omega_axis_from_lambda_range(cfg.grids.lambda_range_nm, cfg.grids.n_omega);
  const auto theta_axis =
      spdc::linspace(-spdc::kPi, spdc::kPi, cfg.grids.n_theta_s);
  const auto grid = spdc::frequency_angular_spectrum(
      cfg.film, cfg.pump, omega_axis, theta_axis, cfg.grids.n_theta_i);

  auto csv = out.open("spectrum.csv");
  csv << "omega_thz,theta_s_rad,rate\n";
  for (std::size_t i = 0; i < grid.omega_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.theta_axis.size(); ++j) {
      csv << fmt9(spdc::thz_from_omega(grid.omega_axis[i])) << ','
          << fmt9(grid.theta_axis[j]) << ',' << fmt9(grid.at(i, j)) << '\n';
    }
  }
  if (dump_grid) {
    const auto joint = spdc::sample_joint_grid(
        cfg.film, cfg.pump, omega_axis, theta_axis,
        spdc::circle_midpoints(cfg.grids.n_theta_i));
    auto gcsv = out.open("grid.csv");
    gcsv << "omega_thz,theta_s_rad,theta_i_rad,rate\n";
    for (std::size_t i = 0; i < joint.omega_s_axis.size(); ++i)
      for (std::size_t j = 0; j < joint.theta_s_axis.size(); ++j)
        for (std::size_t k = 0; k < joint.theta_i_axis.size(); ++k)
          gcsv << fmt9(spdc::thz_from_omega(joint.omega_s_axis[i])) << ','
               << fmt9(joint.theta_s_axis[j]) << ','
               << fmt9(joint.theta_i_axis[k]) << ',' << fmt9(joint.at(i, j, k))
               << '\n';
  }
  out.summary({{"rows", grid.omega_axis.size() * grid.theta_axis.size()},
               {"file", (out.dir / "spectrum.csv").string()}});
  return 0;
}

int run_profile(const spdc::RunConfig& cfg, const Output& out) {
  const auto prof = spdc::angular_emission_profile(
      cfg.film, cfg.pump, cfg.forward_window.band_nm, cfg.grids.n_theta_s,
      cfg.grids.scenario.n_omega);
  auto csv = out.open("profile.csv");
  csv << "theta_rad,p_signal,p_idler\n";
  for (std::size_t j = 0; j < prof.theta_axis.size(); ++j) {
    csv << fmt9(prof.theta_axis[j]) << ',' << fmt9(prof.signal[j]) << ','
        << fmt9(prof.idler[j]) << '\n';
  }
  spdc::KahanSum fwd, bwd;
  for (std::size_t j = 0; j < prof.theta_axis.size(); ++j) {
    (std::abs(prof.theta_axis[j]) < spdc::kPi / 2.0 ? fwd : bwd).add(prof.signal[j]);
  }
  out.summary({{"backward_to_forward_signal", bwd.value() / fwd.value()},
               {"file", (out.dir / "profile.csv").string()}});
  return 0;
}

int run_scenarios(const spdc::RunConfig& cfg, const Output& out) {
  const auto rates = spdc::scenario_rates(cfg.film, cfg.pump, cfg.forward_window,
                                          cfg.backward_window, cfg.grids.scenario);
  const double ratio = spdc::counter_to_co_ratio(rates);
  out.summary({{"ratio", ratio},
               {"r_ff", rates.ff},
               {"r_fb", rates.fb},
               {"r_bf", rates.bf},
               {"r_bb", rates.bb}});
  return 0;
}

int run_bandwidth(const spdc::RunConfig& cfg, const Output& out) {
  const auto bw = spdc::emission_bandwidth(cfg.film, cfg.pump,
                                           cfg.forward_window.full_width,
                                           cfg.grids.bandwidth);
  auto csv = out.open("bandwidth_spectrum.csv");
  csv << "nu_thz,lambda_nm,density\n";
  for (std::size_t j = 0; j < bw.nu_thz.size(); ++j) {
    csv << fmt9(bw.nu_thz[j]) << ','
        << fmt9(spdc::kSpeedOfLight * 1e-3 / bw.nu_thz[j]) << ','
        << fmt9(bw.density[j]) << '\n';
  }
  out.summary({{"bandwidth_thz", bw.fwhm_thz},
               {"wavelength_span_nm", bw.lambda_span_nm},
               {"correlation_time_fs", spdc::correlation_time_fs(bw.fwhm_thz)},
               {"half_max_nu_thz", {bw.nu_lo_thz, bw.nu_hi_thz}},
               {"file", (out.dir / "bandwidth_spectrum.csv").string()}});
  return 0;
}

int run_coherence(const spdc::RunConfig& cfg, const Output& out, double pump_nm) {
  const auto lc = spdc::coherence_length(cfg.film, pump_nm);
  json j{{"pump_nm", pump_nm}, {"infinite", lc.infinite}};
  j["coherence_length_um"] =
      lc.infinite ? json("inf") : json(lc.length * 1e6);
  out.summary(j);
  return 0;
}

int run_simulate(const spdc::RunConfig& cfg, const Output& out, std::uint64_t seed) {
  const auto& s = cfg.simulation;
  const auto [t1, t2] = spdc::simulate_time_tags(
      s.source, s.det1, s.det2, cfg.pump.power_w * 1e3, s.duration_s, seed);
  auto csv = out.open("tags.csv");
  csv << "detector,time_s\n";
  std::size_t i = 0, j = 0;
  while (i < t1.size() || j < t2.size()) {
    const bool take1 =
        j >= t2.size() || (i < t1.size() && t1[i] <= t2[j]);
    if (take1) {
      csv << "1," << fmt_time(t1[i++]) << '\n';
    } else {
      csv << "2," << fmt_time(t2[j++]) << '\n';
    }
  }
  out.summary({{"tags_detector_1", t1.size()},
               {"tags_detector_2", t2.size()},
               {"duration_s", s.duration_s},
               {"file", (out.dir / "tags.csv").string()}});
  return 0;
}

int run_g2(const spdc::RunConfig& cfg, const Output& out, std::uint64_t seed) {
  const auto& s = cfg.simulation;
  const auto [t1, t2] = spdc::simulate_time_tags(
      s.source, s.det1, s.det2, cfg.pump.power_w * 1e3, s.duration_s, seed);
  const auto hist =
      spdc::coincidence_histogram(t1, t2, s.bin_width_s, s.tau_max_s);
  const double sigma_eff = std::hypot(s.det1.jitter_sigma, s.det2.jitter_sigma);
  const double exclusion = std::max(5.0 * sigma_eff, 2.0 * s.bin_width_s);
  const auto g2 = spdc::g2_from_histogram(hist, exclusion);

  auto hcsv = out.open("histogram.csv");
  hcsv << "tau_s,counts\n";
  for (std::size_t k = 0; k < hist.counts.size(); ++k) {
    hcsv << fmt_time(hist.tau_axis[k]) << ',' << hist.counts[k] << '\n';
  }
  auto gcsv = out.open("g2.csv");
  gcsv << "tau_s,g2\n";
  for (std::size_t k = 0; k < g2.tau_axis.size(); ++k) {
    gcsv << fmt_time(g2.tau_axis[k]) << ',' << fmt9(g2.g2[k]) << '\n';
  }
  out.summary({{"g2_zero", g2.g2_zero},
               {"baseline_counts_per_bin", g2.baseline},
               {"histogram", (out.dir / "histogram.csv").string()},
               {"g2_curve", (out.dir / "g2.csv").string()}});
  return 0;
}

int run_tomo(const spdc::RunConfig& cfg, const Output& out,
             const std::optional<std::string>& counts_path,
             const std::optional<double>& theta, std::uint64_t seed,
             bool print_settings) {
  if (print_settings) {
    json settings = json::array();
    for (const auto& s : spdc::standard_16_settings()) {
      settings.push_back({spdc::basis_name(s.first), spdc::basis_name(s.second)});
    }
    out.summary({{"settings", settings}});
    return 0;
  }
  spdc::MleOptions opts;
  opts.flip_rl = cfg.tomography.flip_rl;
  opts.baseline_hz = cfg.tomography.baseline_hz;

  spdc::TomographyResult result;
  std::optional<spdc::TwoPhotonState> target;
  if (counts_path) {
    const auto records = read_counts_csv(*counts_path);
    if (!cfg.tomography.target.empty() && cfg.tomography.target != "none") {
      target = spdc::bell_state(cfg.tomography.target);
    }
    result = spdc::mle_reconstruct(records, target, opts);
  } else if (theta) {
    result = spdc::pump_angle_experiment(*theta, cfg.tomography.werner_p,
                                         cfg.tomography.mean_total, seed, opts);
  } else {
    throw std::invalid_argument("tomo requires either --counts or --theta");
  }

  json j{{"rho", rho_to_json(result.rho)},
         {"concurrence", result.concurrence},
         {"purity", result.purity},
         {"log_likelihood", result.log_likelihood},
         {"converged", result.converged},
         {"iterations", result.iterations}};
  if (result.fidelity_to_target) j["fidelity"] = *result.fidelity_to_target;
  auto jf = out.open("tomography.json");
  jf << j.dump(2) << '\n';
  out.summary(j);
  return 0;
}

int run_state(const Output& out, double theta) {
  const auto state = spdc::pair_state_from_pump(theta);
  json amps = json::array();
  for (const auto& a : state.amplitudes) amps.push_back({a.real(), a.imag()});
  json fid;
  for (const char* name : {"phi+", "phi-", "psi+", "psi-"}) {
    fid[name] = spdc::state_fidelity(spdc::bell_state(name), state);
  }
  out.summary({{"theta_rad", theta},
               {"amplitudes_hh_hv_vh_vv", amps},
               {"bell_fidelities", fid}});
  return 0;
}

int run_shg(const spdc::RunConfig& cfg, const Output& out, std::size_t n_theta) {
  auto csv = out.open("shg.csv");
  csv << "theta_rad,parallel,perpendicular\n";
  const double d = cfg.film.chi2;
  for (std::size_t i = 0; i < n_theta; ++i) {
    const double th = 2.0 * spdc::kPi * static_cast<double>(i) /
                      static_cast<double>(n_theta);
    csv << fmt9(th) << ','
        << fmt9(spdc::shg_intensity(th, spdc::Analyzer::Parallel, d)) << ','
        << fmt9(spdc::shg_intensity(th, spdc::Analyzer::Perpendicular, d)) << '\n';
  }
  out.summary({{"samples", n_theta}, {"file", (out.dir / "shg.csv").string()}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "spdcfilm: non-phase-matched SPDC simulator for subwavelength films"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  Output out;
  std::string out_dir = ".";
  app.add_option("--config", config_path, "JSON config file (defaults embedded)");
  app.add_flag("--json", out.json_summary, "machine-readable JSON summary on stdout");
  app.add_option("--out", out_dir, "output directory for CSV/JSON files");

  // per-subcommand overrides
  std::optional<int> layers_opt;
  std::optional<double> pump_nm_opt, waist_um_opt, power_mw_opt, width_opt;
  auto add_physics_opts = [&](CLI::App* cmd) {
    cmd->add_option("--layers", layers_opt, "film.layer_count override");
    cmd->add_option("--pump-nm", pump_nm_opt, "pump.lambda_nm override");
    cmd->add_option("--waist-um", waist_um_opt, "pump.waist_um override");
    cmd->add_option("--power-mw", power_mw_opt, "pump.power_mw override");
    cmd->add_option("--width-rad", width_opt, "windows.full_width_rad override");
  };

  auto* spectrum = app.add_subcommand(
      "spectrum",
      "frequency-angular spectrum S(omega_s, theta_s) -> spectrum.csv; reads "
      "film.*, pump.*, grids.n_omega, grids.n_theta_s, grids.n_theta_i, "
      "grids.lambda_range_nm");
  bool dump_grid = false;
  spectrum->add_flag("--dump-grid", dump_grid,
                     "also write the full (omega, theta_s, theta_i) grid.csv");
  add_physics_opts(spectrum);

  auto* profile = app.add_subcommand(
      "profile",
      "angular emission profiles -> profile.csv; reads film.*, pump.*, "
      "windows.band_nm, grids.n_theta_s, grids.scenario_n_omega");
  add_physics_opts(profile);

  auto* scenarios = app.add_subcommand(
      "scenarios",
      "four propagation-scenario rates and the counter/co ratio; reads film.*, "
      "pump.*, windows.*, grids.scenario_n_omega, grids.scenario_n_theta");
  add_physics_opts(scenarios);

  auto* bandwidth = app.add_subcommand(
      "bandwidth",
      "collection-cone emission bandwidth and correlation time -> "
      "bandwidth_spectrum.csv; reads film.*, pump.*, windows.full_width_rad, "
      "grids.bandwidth_*");
  add_physics_opts(bandwidth);

  auto* coherence = app.add_subcommand(
      "coherence", "degenerate coherence length; reads film.dispersion, --pump-nm");
  double coherence_pump_nm = 775.0;
  coherence->add_option("--pump-nm", coherence_pump_nm, "pump wavelength in nm");

  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand(
      "simulate",
      "Monte Carlo time tags -> tags.csv; reads simulation.*, pump.power_mw");
  simulate->add_option("--seed", seed, "RNG seed")->required();
  add_physics_opts(simulate);

  auto* g2 = app.add_subcommand(
      "g2",
      "simulate + correlate -> histogram.csv, g2.csv; reads simulation.*, "
      "pump.power_mw");
  g2->add_option("--seed", seed, "RNG seed")->required();
  add_physics_opts(g2);

  auto* tomo = app.add_subcommand(
      "tomo",
      "two-qubit tomography (MLE); --counts CSV or --theta simulation; reads "
      "tomography.*");
  std::optional<std::string> counts_path;
  std::optional<double> tomo_theta;
  bool print_settings = false;
  tomo->add_option("--counts", counts_path,
                   "counts CSV (basis_1,basis_2,counts,seconds)");
  auto* tomo_theta_opt = tomo->add_option(
      "--theta", tomo_theta,
      "pump angle for an end-to-end simulated experiment (rad)");
  auto* tomo_seed_opt = tomo->add_option("--seed", seed, "RNG seed for --theta mode");
  tomo_theta_opt->needs(tomo_seed_opt);
  tomo->add_flag("--print-settings", print_settings,
                 "print the canonical 16 measurement settings and exit");

  auto* state = app.add_subcommand(
      "state", "tensor-derived two-photon state and Bell fidelities (no config)");
  double state_theta = 0.0;
  state->add_option("--theta", state_theta, "pump angle from the armchair axis")
      ->required();

  auto* shg = app.add_subcommand(
      "shg", "polarization-resolved SHG pattern -> shg.csv; reads film.chi2");
  std::size_t shg_samples = 361;
  shg->add_option("--samples", shg_samples, "number of angle samples");

  for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; })) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // any usage problem is a validation error
  }
  out.dir = out_dir;

  try {
    spdc::RunConfig cfg = load_config(config_path);
    if (layers_opt) cfg.film.layer_count = *layers_opt;
    if (pump_nm_opt) cfg.pump.lambda_nm = *pump_nm_opt;
    if (waist_um_opt) cfg.pump.waist = *waist_um_opt * 1e-6;
    if (power_mw_opt) cfg.pump.power_w = *power_mw_opt * 1e-3;
    if (width_opt) {
      cfg.forward_window.full_width = *width_opt;
      cfg.backward_window.full_width = *width_opt;
    }
    if (cfg.film.layer_count < 1)
      throw std::invalid_argument("film.layer_count: must be >= 1");

    if (*spectrum) return run_spectrum(cfg, out, dump_grid);
    if (*profile) return run_profile(cfg, out);
    if (*scenarios) return run_scenarios(cfg, out);
    if (*bandwidth) return run_bandwidth(cfg, out);
    if (*coherence) return run_coherence(cfg, out, coherence_pump_nm);
    if (*simulate) return run_simulate(cfg, out, seed);
    if (*g2) return run_g2(cfg, out, seed);
    if (*tomo) return run_tomo(cfg, out, counts_path, tomo_theta, seed, print_settings);
    if (*state) return run_state(out, state_theta);
    if (*shg) return run_shg(cfg, out, shg_samples);
    std::cerr << "no subcommand selected\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}
