#pragma once

#include <array>
#include <string>
#include <vector>

namespace spdc {

/// Multi-pole Sellmeier model, wavelength in micrometers:
///   n^2(l) = c0 + sum_j c_{2j+1} * l^2 / (l^2 - c_{2j+2})
/// A single coefficient [c0] describes a constant index sqrt(c0).
struct DispersionModel {
  std::vector<double> coefficients;
  std::array<double, 2> valid_range_nm{400.0, 6500.0};
  std::string name = "custom";

  /// n(lambda) for a vacuum wavelength in nm. Throws std::domain_error
  /// naming the valid range when lambda is outside it.
  double refractive_index(double lambda_nm) const;

  /// k = omega * n / c in rad/m; omega in rad/s. Throws on omega <= 0 and
  /// when the corresponding vacuum wavelength is outside the valid range.
  double wavevector(double omega) const;

  bool in_range(double lambda_nm) const {
    return lambda_nm >= valid_range_nm[0] && lambda_nm <= valid_range_nm[1];
  }

  /// Ordinary-ray GaSe default. Two-pole fit calibrated against the
  /// degenerate-downconversion coherence lengths of the film (3.6 um at a
  /// 775 nm pump, 151 nm at 405 nm) with n(1550 nm) = 2.780.
  static DispersionModel gase_ordinary();

  static DispersionModel constant_index(double n, double min_nm = 100.0,
                                        double max_nm = 20000.0);

  /// Parse {"coefficients": [...], "range_nm": [min,max], "name": optional}
  /// from JSON text. Throws std::invalid_argument on malformed input.
  static DispersionModel from_json_text(const std::string& text);
  static DispersionModel from_file(const std::string& path);
};

struct NonlinearFilm {
  int layer_count = 1;
  double chi2 = 1.0;  // second-order susceptibility magnitude, arbitrary units
  DispersionModel dispersion = DispersionModel::gase_ordinary();

  double thickness() const;  // layer_count * 0.801 nm
};

/// layer_count * 0.801 nm; throws std::domain_error for layer_count < 1.
double layers_to_thickness(int layer_count);

struct CoherenceLength {
  double length = 0.0;  // meters; +inf when infinite
  bool infinite = false;
};

/// Degenerate collinear forward coherence length pi / |k_p - 2 k(2 lambda_p)|,
/// which equals lambda_p / (2 (n(lambda_p) - n(2 lambda_p))).
/// Zero mismatch returns an explicit infinite flag.
CoherenceLength coherence_length(const NonlinearFilm& film, double lambda_pump_nm);

}  // namespace spdc
