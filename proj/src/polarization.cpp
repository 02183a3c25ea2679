#include "spdcfilm/polarization.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace spdc {

namespace {
constexpr double kNormTol = 1e-12;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}  // namespace

double TwoPhotonState::norm_sq() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return s;
}

TwoPhotonState TwoPhotonState::canonical() const {
  TwoPhotonState out = *this;
  for (const auto& a : amplitudes) {
    if (std::abs(a) > 1e-12) {
      const std::complex<double> phase = std::conj(a) / std::abs(a);
      for (auto& b : out.amplitudes) b *= phase;
      break;
    }
  }
  return out;
}

Eigen::Vector4cd TwoPhotonState::vector() const {
  Eigen::Vector4cd v;
  for (int i = 0; i < 4; ++i) v(i) = amplitudes[static_cast<std::size_t>(i)];
  return v;
}

BellState parse_bell_name(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(static_cast<char>(std::tolower(c)));
  if (s == "phi+" || s == "phip" || s == "phi_plus") return BellState::PhiPlus;
  if (s == "phi-" || s == "phim" || s == "phi_minus") return BellState::PhiMinus;
  if (s == "psi+" || s == "psip" || s == "psi_plus") return BellState::PsiPlus;
  if (s == "psi-" || s == "psim" || s == "psi_minus") return BellState::PsiMinus;
  throw std::invalid_argument("unknown Bell state '" + name +
                              "'; valid names: phi+, phi-, psi+, psi-");
}

TwoPhotonState bell_state(BellState which) {
  TwoPhotonState s;
  switch (which) {
    case BellState::PhiPlus:
      s.amplitudes = {kInvSqrt2, 0.0, 0.0, kInvSqrt2};
      break;
    case BellState::PhiMinus:
      s.amplitudes = {kInvSqrt2, 0.0, 0.0, -kInvSqrt2};
      break;
    case BellState::PsiPlus:
      s.amplitudes = {0.0, kInvSqrt2, kInvSqrt2, 0.0};
      break;
    case BellState::PsiMinus:
      s.amplitudes = {0.0, kInvSqrt2, -kInvSqrt2, 0.0};
      break;
  }
  return s;
}

TwoPhotonState bell_state(const std::string& name) {
  return bell_state(parse_bell_name(name));
}

Eigen::Matrix2d ChiTensor::pair_amplitude(double theta) const {
  // A_xx = chi_xxy e_y ... only the four D3h elements survive:
  //   A_xx = -d cos, A_xy = A_yx = -d sin, A_yy = d cos.
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2d amp;
  amp << -d * c, -d * s, -d * s, d * c;
  return amp;
}

Eigen::Vector2d ChiTensor::shg_polarization(double theta) const {
  return {-d * std::sin(2.0 * theta), d * std::cos(2.0 * theta)};
}

TwoPhotonState pair_state_from_pump(double theta, double frame_rotation) {
  Eigen::Matrix2cd amp = ChiTensor{1.0}.pair_amplitude(theta).cast<std::complex<double>>();
  if (frame_rotation != 0.0) {
    Eigen::Matrix2d rot;
    rot << std::cos(frame_rotation), -std::sin(frame_rotation),
        std::sin(frame_rotation), std::cos(frame_rotation);
    amp = rot.transpose() * amp * rot;
  }
  TwoPhotonState out;
  out.amplitudes = {amp(0, 0), amp(0, 1), amp(1, 0), amp(1, 1)};
  const double norm = std::sqrt(out.norm_sq());
  for (auto& a : out.amplitudes) a /= norm;
  return out.canonical();
}

double shg_intensity(double theta, Analyzer analyzer, double d) {
  // projecting the SHG polarization onto the pump axis collapses to cos(3t)
  const Eigen::Vector2d p = ChiTensor{d}.shg_polarization(theta);
  const Eigen::Vector2d pump_axis{std::sin(theta), std::cos(theta)};
  const double par = p.dot(pump_axis);
  const double perp = p(0) * pump_axis(1) - p(1) * pump_axis(0);
  return analyzer == Analyzer::Parallel ? par * par : perp * perp;
}

Matrix4cd state_to_density_matrix(const TwoPhotonState& state) {
  if (std::abs(state.norm_sq() - 1.0) > kNormTol) {
    throw std::invalid_argument("state is not normalized");
  }
  const Eigen::Vector4cd v = state.vector();
  return v * v.adjoint();
}

double state_fidelity(const TwoPhotonState& a, const TwoPhotonState& b) {
  const std::complex<double> overlap = a.vector().adjoint() * b.vector();
  return std::norm(overlap);
}

}  // namespace spdc
