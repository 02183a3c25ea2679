#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>

namespace spdc {

using Matrix4cd = Eigen::Matrix4cd;

/// Lab/crystal frame convention: H is the zigzag (x) axis, V the armchair (y)
/// axis; pump polarization angles are measured from the armchair axis.
struct AxisConvention {
  static constexpr const char* h_axis = "zigzag (x)";
  static constexpr const char* v_axis = "armchair (y)";
};

/// Two-photon polarization state, amplitudes ordered (HH, HV, VH, VV),
/// normalized to unit norm within 1e-12.
struct TwoPhotonState {
  std::array<std::complex<double>, 4> amplitudes{};

  double norm_sq() const;
  /// Global phase fixed so the first nonzero amplitude is real positive.
  TwoPhotonState canonical() const;
  Eigen::Vector4cd vector() const;
};

/// D3h second-order susceptibility with the four nonzero in-plane elements
/// chi_yyy = d, chi_yxx = chi_xxy = chi_xyx = -d.
struct ChiTensor {
  double d = 1.0;

  /// Two-photon amplitude matrix A_jk = sum_i e_i chi_ijk for a pump field
  /// e = (sin theta, cos theta) in the (x, y) = (zigzag, armchair) frame.
  Eigen::Matrix2d pair_amplitude(double theta) const;

  /// Second-harmonic polarization (P_x, P_y) = (-d sin 2theta, d cos 2theta).
  Eigen::Vector2d shg_polarization(double theta) const;
};

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

/// Parse "phi+", "phi-", "psi+", "psi-" (case-insensitive). Throws
/// std::invalid_argument listing valid names.
BellState parse_bell_name(const std::string& name);

TwoPhotonState bell_state(BellState which);
TwoPhotonState bell_state(const std::string& name);

/// Biphoton polarization state generated by a pump polarized at angle theta
/// from the armchair axis: proportional to
///   cos(theta) (|VV> - |HH>) - sin(theta) (|HV> + |VH>),
/// from the contraction of the D3h tensor with the pump field. An optional
/// lab-frame rotation is applied to both photons.
TwoPhotonState pair_state_from_pump(double theta, double frame_rotation = 0.0);

enum class Analyzer { Parallel, Perpendicular };

/// Polarization-resolved second-harmonic intensity: d^2 cos^2(3 theta)
/// parallel to the pump, d^2 sin^2(3 theta) perpendicular.
double shg_intensity(double theta, Analyzer analyzer, double d = 1.0);

/// |psi><psi| for a normalized state; throws std::invalid_argument otherwise.
Matrix4cd state_to_density_matrix(const TwoPhotonState& state);

/// |<a|b>|^2 between pure states.
double state_fidelity(const TwoPhotonState& a, const TwoPhotonState& b);

}  // namespace spdc
