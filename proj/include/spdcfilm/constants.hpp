#pragma once

namespace spdc {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

// GaSe single-layer thickness, fixed so that 216 layers give 173 nm.
inline constexpr double kLayerThickness = 0.801e-9;  // m

inline constexpr double nm_to_m(double nm) { return nm * 1e-9; }
inline constexpr double m_to_nm(double m) { return m * 1e9; }

// vacuum wavelength (nm) <-> angular frequency (rad/s)
inline constexpr double omega_from_lambda_nm(double lambda_nm) {
  return 2.0 * kPi * kSpeedOfLight / (lambda_nm * 1e-9);
}
inline constexpr double lambda_nm_from_omega(double omega) {
  return 2.0 * kPi * kSpeedOfLight / omega * 1e9;
}
inline constexpr double thz_from_omega(double omega) {
  return omega / (2.0 * kPi * 1e12);
}
inline constexpr double omega_from_thz(double nu_thz) {
  return 2.0 * kPi * 1e12 * nu_thz;
}

}  // namespace spdc
