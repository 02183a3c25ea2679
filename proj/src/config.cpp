#include "spdcfilm/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spdcfilm/constants.hpp"

namespace spdc {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
  throw std::invalid_argument(path + ": " + why);
}

double get_number(const json& j, const std::string& path, double fallback) {
  if (!j.contains(path)) return fallback;
  if (!j[path].is_number()) fail(path, "expected a number");
  return j[path].get<double>();
}

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) fail(path, "must be > 0");
}

void require_nonnegative(double v, const std::string& path) {
  if (v < 0.0) fail(path, "must be >= 0");
}

std::array<double, 2> get_range(const json& j, const std::string& key,
                                const std::string& path,
                                std::array<double, 2> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j[key];
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    fail(path, "expected [min, max]");
  std::array<double, 2> r{v[0].get<double>(), v[1].get<double>()};
  if (!(r[0] < r[1])) fail(path, "min must be < max");
  return r;
}

}  // namespace

RunConfig RunConfig::defaults() { return RunConfig{}; }

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  RunConfig c;

  if (j.contains("film")) {
    const auto& f = j["film"];
    if (f.contains("layer_count")) {
      if (!f["layer_count"].is_number_integer() || f["layer_count"].get<int>() < 1)
        fail("film.layer_count", "must be a positive integer");
      c.film.layer_count = f["layer_count"].get<int>();
    }
    c.film.chi2 = get_number(f, "chi2", c.film.chi2);
    require_positive(c.film.chi2, "film.chi2");
    if (f.contains("dispersion_file")) {
      c.film.dispersion =
          DispersionModel::from_file(f["dispersion_file"].get<std::string>());
    } else if (f.contains("dispersion")) {
      c.film.dispersion =
          DispersionModel::from_json_text(f["dispersion"].dump());
    }
  }

  if (j.contains("pump")) {
    const auto& p = j["pump"];
    c.pump.lambda_nm = get_number(p, "lambda_nm", c.pump.lambda_nm);
    require_positive(c.pump.lambda_nm, "pump.lambda_nm");
    c.pump.waist = get_number(p, "waist_um", c.pump.waist * 1e6) * 1e-6;
    require_positive(c.pump.waist, "pump.waist_um");
    c.pump.power_w = get_number(p, "power_mw", c.pump.power_w * 1e3) * 1e-3;
    require_nonnegative(c.pump.power_w, "pump.power_mw");
    c.pump.theta = get_number(p, "theta_rad", c.pump.theta);
  }

  if (j.contains("windows")) {
    const auto& w = j["windows"];
    const double width = get_number(w, "full_width_rad", c.forward_window.full_width);
    require_positive(width, "windows.full_width_rad");
    const auto band = get_range(w, "band_nm", "windows.band_nm",
                                c.forward_window.band_nm);
    c.forward_window = {0.0, width, band};
    c.backward_window = {kPi, width, band};
  }

  if (j.contains("grids")) {
    const auto& g = j["grids"];
    auto get_size = [&](const char* key, std::size_t fallback) {
      if (!g.contains(key)) return fallback;
      if (!g[key].is_number_integer() || g[key].get<long long>() < 2)
        fail(std::string("grids.") + key, "must be an integer >= 2");
      return g[key].get<std::size_t>();
    };
    c.grids.n_omega = get_size("n_omega", c.grids.n_omega);
    c.grids.n_theta_s = get_size("n_theta_s", c.grids.n_theta_s);
    c.grids.n_theta_i = get_size("n_theta_i", c.grids.n_theta_i);
    c.grids.lambda_range_nm = get_range(g, "lambda_range_nm",
                                        "grids.lambda_range_nm",
                                        c.grids.lambda_range_nm);
    c.grids.scenario.n_omega = get_size("scenario_n_omega", c.grids.scenario.n_omega);
    c.grids.scenario.n_theta = get_size("scenario_n_theta", c.grids.scenario.n_theta);
    c.grids.bandwidth.span_thz =
        get_number(g, "bandwidth_span_thz", c.grids.bandwidth.span_thz);
    require_positive(c.grids.bandwidth.span_thz, "grids.bandwidth_span_thz");
    c.grids.bandwidth.n_nu = get_size("bandwidth_n_nu", c.grids.bandwidth.n_nu);
    c.grids.bandwidth.n_q = get_size("bandwidth_n_q", c.grids.bandwidth.n_q);
  }

  if (j.contains("simulation")) {
    const auto& s = j["simulation"];
    c.simulation.source.pair_rate_per_mw =
        get_number(s, "pair_rate_per_mw", c.simulation.source.pair_rate_per_mw);
    require_nonnegative(c.simulation.source.pair_rate_per_mw,
                        "simulation.pair_rate_per_mw");
    if (s.contains("background_hz")) {
      const auto& bg = s["background_hz"];
      if (!bg.is_array() || bg.size() != 2 || !bg[0].is_number() || !bg[1].is_number())
        fail("simulation.background_hz", "expected [rate1, rate2]");
      require_nonnegative(bg[0].get<double>(), "simulation.background_hz[0]");
      require_nonnegative(bg[1].get<double>(), "simulation.background_hz[1]");
      c.simulation.source.uncorrelated_background_1 = bg[0].get<double>();
      c.simulation.source.uncorrelated_background_2 = bg[1].get<double>();
    }
    auto load_det = [&](const char* key, DetectorModel& d) {
      if (!s.contains(key)) return;
      const auto& sd = s[key];
      const std::string base = std::string("simulation.") + key;
      d.efficiency = get_number(sd, "efficiency", d.efficiency);
      if (d.efficiency < 0.0 || d.efficiency > 1.0)
        fail(base + ".efficiency", "must be in [0, 1]");
      d.dark_rate = get_number(sd, "dark_hz", d.dark_rate);
      require_nonnegative(d.dark_rate, base + ".dark_hz");
      d.jitter_sigma = get_number(sd, "jitter_ps", d.jitter_sigma * 1e12) * 1e-12;
      require_nonnegative(d.jitter_sigma, base + ".jitter_ps");
    };
    load_det("detector_1", c.simulation.det1);
    load_det("detector_2", c.simulation.det2);
    c.simulation.duration_s = get_number(s, "duration_s", c.simulation.duration_s);
    require_positive(c.simulation.duration_s, "simulation.duration_s");
    c.simulation.bin_width_s =
        get_number(s, "bin_ns", c.simulation.bin_width_s * 1e9) * 1e-9;
    require_positive(c.simulation.bin_width_s, "simulation.bin_ns");
    c.simulation.tau_max_s =
        get_number(s, "tau_range_ns", c.simulation.tau_max_s * 1e9) * 1e-9;
    require_positive(c.simulation.tau_max_s, "simulation.tau_range_ns");
    if (s.contains("seed")) {
      if (!s["seed"].is_number_integer()) fail("simulation.seed", "must be an integer");
      c.simulation.seed = s["seed"].get<std::uint64_t>();
    }
    if (s.contains("powers_mw")) {
      if (!s["powers_mw"].is_array() || s["powers_mw"].empty())
        fail("simulation.powers_mw", "must be a nonempty array");
      c.simulation.powers_mw = s["powers_mw"].get<std::vector<double>>();
      for (double p : c.simulation.powers_mw)
        require_nonnegative(p, "simulation.powers_mw[*]");
    }
  }

  if (j.contains("tomography")) {
    const auto& t = j["tomography"];
    c.tomography.werner_p = get_number(t, "noise_p", c.tomography.werner_p);
    if (c.tomography.werner_p < 0.0 || c.tomography.werner_p > 1.0)
      fail("tomography.noise_p", "must be in [0, 1]");
    c.tomography.mean_total = get_number(t, "mean_total", c.tomography.mean_total);
    require_positive(c.tomography.mean_total, "tomography.mean_total");
    if (t.contains("target")) c.tomography.target = t["target"].get<std::string>();
    if (t.contains("flip_rl")) {
      if (!t["flip_rl"].is_boolean()) fail("tomography.flip_rl", "must be a boolean");
      c.tomography.flip_rl = t["flip_rl"].get<bool>();
    }
    c.tomography.baseline_hz = get_number(t, "baseline_hz", c.tomography.baseline_hz);
    require_nonnegative(c.tomography.baseline_hz, "tomography.baseline_hz");
  }

  return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config file not found: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string RunConfig::to_json_text() const {
  json j;
  j["film"] = {{"layer_count", film.layer_count},
               {"chi2", film.chi2},
               {"dispersion",
                {{"name", film.dispersion.name},
                 {"coefficients", film.dispersion.coefficients},
                 {"range_nm", film.dispersion.valid_range_nm}}}};
  j["pump"] = {{"lambda_nm", pump.lambda_nm},
               {"waist_um", pump.waist * 1e6},
               {"power_mw", pump.power_w * 1e3},
               {"theta_rad", pump.theta}};
  j["windows"] = {{"full_width_rad", forward_window.full_width},
                  {"band_nm", forward_window.band_nm}};
  j["grids"] = {{"n_omega", grids.n_omega},
                {"n_theta_s", grids.n_theta_s},
                {"n_theta_i", grids.n_theta_i},
                {"lambda_range_nm", grids.lambda_range_nm},
                {"scenario_n_omega", grids.scenario.n_omega},
                {"scenario_n_theta", grids.scenario.n_theta},
                {"bandwidth_span_thz", grids.bandwidth.span_thz},
                {"bandwidth_n_nu", grids.bandwidth.n_nu},
                {"bandwidth_n_q", grids.bandwidth.n_q}};
  j["simulation"] = {
      {"pair_rate_per_mw", simulation.source.pair_rate_per_mw},
      {"background_hz",
       {simulation.source.uncorrelated_background_1,
        simulation.source.uncorrelated_background_2}},
      {"detector_1",
       {{"efficiency", simulation.det1.efficiency},
        {"dark_hz", simulation.det1.dark_rate},
        {"jitter_ps", simulation.det1.jitter_sigma * 1e12}}},
      {"detector_2",
       {{"efficiency", simulation.det2.efficiency},
        {"dark_hz", simulation.det2.dark_rate},
        {"jitter_ps", simulation.det2.jitter_sigma * 1e12}}},
      {"duration_s", simulation.duration_s},
      {"bin_ns", simulation.bin_width_s * 1e9},
      {"tau_range_ns", simulation.tau_max_s * 1e9},
      {"seed", simulation.seed},
      {"powers_mw", simulation.powers_mw}};
  j["tomography"] = {{"noise_p", tomography.werner_p},
                     {"mean_total", tomography.mean_total},
                     {"target", tomography.target},
                     {"flip_rl", tomography.flip_rl},
                     {"baseline_hz", tomography.baseline_hz}};
  return j.dump(2);
}

}  // namespace spdc
