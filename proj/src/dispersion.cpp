#include "spdcfilm/dispersion.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "spdcfilm/constants.hpp"

namespace spdc {

double DispersionModel::refractive_index(double lambda_nm) const {
  if (!std::isfinite(lambda_nm) || !in_range(lambda_nm)) {
    std::ostringstream msg;
    msg << "wavelength " << lambda_nm << " nm outside dispersion validity ["
        << valid_range_nm[0] << ", " << valid_range_nm[1] << "] nm";
    throw std::domain_error(msg.str());
  }
  if (coefficients.empty() || coefficients.size() % 2 == 0) {
    throw std::invalid_argument(
        "dispersion coefficients must have odd length [c0, b1, p1, ...]");
  }
  const double l2 = (lambda_nm * 1e-3) * (lambda_nm * 1e-3);  // um^2
  double n2 = coefficients[0];
  for (std::size_t j = 1; j + 1 < coefficients.size(); j += 2) {
    n2 += coefficients[j] * l2 / (l2 - coefficients[j + 1]);
  }
  if (!(n2 > 1.0)) {
    std::ostringstream msg;
    msg << "dispersion model yields non-physical n^2 = " << n2 << " at "
        << lambda_nm << " nm";
    throw std::domain_error(msg.str());
  }
  return std::sqrt(n2);
}

double DispersionModel::wavevector(double omega) const {
  if (!(omega > 0.0)) {
    throw std::domain_error("wavevector requires a positive angular frequency");
  }
  const double lambda_nm = lambda_nm_from_omega(omega);
  return omega * refractive_index(lambda_nm) / kSpeedOfLight;
}

DispersionModel DispersionModel::gase_ordinary() {
  DispersionModel m;
  m.coefficients = {4.74276, 2.82934, 0.1284, 3.1485, 2194.0};
  m.valid_range_nm = {400.0, 6500.0};
  m.name = "GaSe-ordinary";
  return m;
}

DispersionModel DispersionModel::constant_index(double n, double min_nm,
                                                double max_nm) {
  DispersionModel m;
  m.coefficients = {n * n};
  m.valid_range_nm = {min_nm, max_nm};
  m.name = "constant";
  return m;
}

DispersionModel DispersionModel::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("dispersion file: ") + e.what());
  }
  if (!j.contains("coefficients") || !j["coefficients"].is_array()) {
    throw std::invalid_argument("dispersion file: missing 'coefficients' array");
  }
  if (!j.contains("range_nm") || !j["range_nm"].is_array() ||
      j["range_nm"].size() != 2) {
    throw std::invalid_argument("dispersion file: missing 'range_nm' [min,max]");
  }
  DispersionModel m;
  m.coefficients = j["coefficients"].get<std::vector<double>>();
  m.valid_range_nm = {j["range_nm"][0].get<double>(),
                      j["range_nm"][1].get<double>()};
  if (m.coefficients.empty() || m.coefficients.size() % 2 == 0) {
    throw std::invalid_argument(
        "dispersion file: 'coefficients' must have odd length [c0, b1, p1, ...]");
  }
  if (!(m.valid_range_nm[0] > 0.0) ||
      !(m.valid_range_nm[1] > m.valid_range_nm[0])) {
    throw std::invalid_argument("dispersion file: invalid 'range_nm'");
  }
  m.name = j.value("name", std::string("custom"));
  return m;
}

DispersionModel DispersionModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("dispersion file not found: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

double NonlinearFilm::thickness() const { return layers_to_thickness(layer_count); }

double layers_to_thickness(int layer_count) {
  if (layer_count < 1) {
    throw std::domain_error("layer_count must be >= 1");
  }
  return static_cast<double>(layer_count) * kLayerThickness;
}

CoherenceLength coherence_length(const NonlinearFilm& film, double lambda_pump_nm) {
  const auto& d = film.dispersion;
  const double omega_p = omega_from_lambda_nm(lambda_pump_nm);
  const double k_p = d.wavevector(omega_p);
  const double k_deg = d.wavevector(omega_p / 2.0);
  const double dk = k_p - 2.0 * k_deg;
  if (dk == 0.0) {
    return {std::numeric_limits<double>::infinity(), true};
  }
  return {kPi / std::abs(dk), false};
}

}  // namespace spdc
