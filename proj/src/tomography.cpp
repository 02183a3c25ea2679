#include "spdcfilm/tomography.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>

namespace spdc {

namespace {

constexpr double kPhysTol = 1e-10;
constexpr double kProbFloor = 1e-12;

using Vec16 = Eigen::Matrix<double, 16, 1>;
using Mat16 = Eigen::Matrix<double, 16, 16>;

// Parameter layout for the triangular factor: 4 real diagonal entries, then
// real/imag pairs for the strictly upper entries in row-major order.
constexpr int kUpperPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

Matrix4cd factor_from_params(const Vec16& t) {
  Matrix4cd T = Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) T(i, i) = t(i);
  for (int m = 0; m < 6; ++m) {
    T(kUpperPairs[m][0], kUpperPairs[m][1]) =
        std::complex<double>(t(4 + 2 * m), t(5 + 2 * m));
  }
  return T;
}

Vec16 params_from_factor(const Matrix4cd& T) {
  Vec16 t;
  for (int i = 0; i < 4; ++i) t(i) = T(i, i).real();
  for (int m = 0; m < 6; ++m) {
    const auto z = T(kUpperPairs[m][0], kUpperPairs[m][1]);
    t(4 + 2 * m) = z.real();
    t(5 + 2 * m) = z.imag();
  }
  return t;
}

Matrix4cd rho_from_factor(const Matrix4cd& T) {
  Matrix4cd rho = T.adjoint() * T;
  const double tr = rho.trace().real();
  return rho / tr;
}

const Matrix4cd& spin_flip() {
  static const Matrix4cd m = [] {
    Matrix4cd f = Matrix4cd::Zero();
    f(0, 3) = -1.0;
    f(1, 2) = 1.0;
    f(2, 1) = 1.0;
    f(3, 0) = -1.0;
    return f;
  }();
  return m;
}

struct Likelihood {
  std::vector<Matrix4cd> projectors;
  std::vector<double> counts;
  double total_counts = 0.0;

  double value_and_gradient(const Vec16& t, Vec16* grad) const {
    const Matrix4cd T = factor_from_params(t);
    const std::size_t m = projectors.size();
    std::vector<double> a(m);
    double a_sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      a[k] = (projectors[k] * T.adjoint() * T).trace().real();
      a_sum += a[k];
    }
    const double floor = kProbFloor * a_sum;
    double ll = 0.0;
    Matrix4cd weight = Matrix4cd::Zero();
    for (std::size_t k = 0; k < m; ++k) {
      const double ak = std::max(a[k], floor);
      ll += counts[k] * std::log(ak);
      if (grad) weight += (counts[k] / ak) * projectors[k];
    }
    ll -= total_counts * std::log(a_sum);
    if (grad) {
      Matrix4cd p_tot = Matrix4cd::Zero();
      for (const auto& p : projectors) p_tot += p;
      const Matrix4cd g = T * (weight - (total_counts / a_sum) * p_tot);
      for (int i = 0; i < 4; ++i) (*grad)(i) = 2.0 * g(i, i).real();
      for (int mm = 0; mm < 6; ++mm) {
        const auto z = g(kUpperPairs[mm][0], kUpperPairs[mm][1]);
        (*grad)(4 + 2 * mm) = 2.0 * z.real();
        (*grad)(5 + 2 * mm) = 2.0 * z.imag();
      }
    }
    return ll;
  }
};

double effective_counts(const MeasurementRecord& r, double baseline_hz) {
  double n = static_cast<double>(r.counts);
  if (baseline_hz > 0.0) n = std::max(0.0, n - baseline_hz * r.acquisition_time);
  return n;
}

}  // namespace

Basis parse_basis(const std::string& label) {
  if (label.size() == 1) {
    switch (std::toupper(static_cast<unsigned char>(label[0]))) {
      case 'H': return Basis::H;
      case 'V': return Basis::V;
      case 'D': return Basis::D;
      case 'A': return Basis::A;
      case 'R': return Basis::R;
      case 'L': return Basis::L;
      default: break;
    }
  }
  throw std::invalid_argument("unknown polarization basis '" + label +
                              "'; valid labels: H V D A R L");
}

std::string basis_name(Basis b) {
  switch (b) {
    case Basis::H: return "H";
    case Basis::V: return "V";
    case Basis::D: return "D";
    case Basis::A: return "A";
    case Basis::R: return "R";
    case Basis::L: return "L";
  }
  return "?";
}

Eigen::Vector2cd basis_vector(Basis b, bool flip_rl) {
  using C = std::complex<double>;
  const double s = 1.0 / std::sqrt(2.0);
  if (flip_rl) {
    if (b == Basis::R) b = Basis::L;
    else if (b == Basis::L) b = Basis::R;
  }
  switch (b) {
    case Basis::H: return {C(1, 0), C(0, 0)};
    case Basis::V: return {C(0, 0), C(1, 0)};
    case Basis::D: return {C(s, 0), C(s, 0)};
    case Basis::A: return {C(s, 0), C(-s, 0)};
    case Basis::R: return {C(s, 0), C(0, s)};
    case Basis::L: return {C(s, 0), C(0, -s)};
  }
  throw std::invalid_argument("invalid basis");
}

Matrix4cd projector(Basis a, Basis b, bool flip_rl) {
  const Eigen::Vector2cd va = basis_vector(a, flip_rl);
  const Eigen::Vector2cd vb = basis_vector(b, flip_rl);
  Eigen::Vector4cd v;
  v << va(0) * vb(0), va(0) * vb(1), va(1) * vb(0), va(1) * vb(1);
  return v * v.adjoint();
}

std::vector<Setting> standard_16_settings() {
  using B = Basis;
  return {{B::H, B::H}, {B::H, B::V}, {B::V, B::V}, {B::V, B::H},
          {B::R, B::H}, {B::R, B::V}, {B::D, B::V}, {B::D, B::H},
          {B::D, B::R}, {B::D, B::D}, {B::R, B::D}, {B::H, B::D},
          {B::V, B::D}, {B::V, B::L}, {B::H, B::L}, {B::R, B::L}};
}

void validate_density_matrix(const Matrix4cd& rho, double tol) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace().real() - 1.0) > tol || std::abs(rho.trace().imag()) > tol) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(rho);
  if (es.eigenvalues().minCoeff() < -tol) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << es.eigenvalues().minCoeff();
    throw std::invalid_argument(msg.str());
  }
}

std::vector<MeasurementRecord> simulate_counts(const Matrix4cd& rho,
                                               const std::vector<Setting>& settings,
                                               double mean_total, std::uint64_t seed,
                                               bool flip_rl) {
  validate_density_matrix(rho);
  if (!(mean_total > 0.0)) throw std::domain_error("mean_total must be positive");
  std::mt19937_64 rng(seed);
  std::vector<MeasurementRecord> records;
  records.reserve(settings.size());
  for (const auto& s : settings) {
    const double p =
        std::max(0.0, (projector(s.first, s.second, flip_rl) * rho).trace().real());
    std::poisson_distribution<std::int64_t> dist(mean_total * p);
    records.push_back({s, p > 0.0 ? dist(rng) : 0, 1.0});
  }
  return records;
}

Matrix4cd linear_reconstruct(const std::vector<MeasurementRecord>& records,
                             bool flip_rl) {
  const std::size_t m = records.size();
  if (m < 16) {
    throw std::runtime_error("linear reconstruction needs at least 16 settings");
  }
  // Hermitian basis: 4 diagonal units, then (E_ab + E_ba) and i(E_ab - E_ba).
  std::vector<Matrix4cd> basis;
  basis.reserve(16);
  for (int i = 0; i < 4; ++i) {
    Matrix4cd g = Matrix4cd::Zero();
    g(i, i) = 1.0;
    basis.push_back(g);
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      Matrix4cd g = Matrix4cd::Zero();
      g(i, j) = 1.0;
      g(j, i) = 1.0;
      basis.push_back(g);
      g(i, j) = std::complex<double>(0.0, 1.0);
      g(j, i) = std::complex<double>(0.0, -1.0);
      basis.push_back(g);
    }
  }
  Eigen::MatrixXd design(m, 16);
  Eigen::VectorXd rhs(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Matrix4cd p =
        projector(records[k].setting.first, records[k].setting.second, flip_rl);
    for (int c = 0; c < 16; ++c) design(k, c) = (p * basis[c]).trace().real();
    rhs(k) = static_cast<double>(records[k].counts);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < 16) {
    throw std::runtime_error(
        "singular design matrix; measurement settings are not informationally "
        "complete");
  }
  const Eigen::VectorXd x = qr.solve(rhs);
  Matrix4cd rho_scaled = Matrix4cd::Zero();
  for (int c = 0; c < 16; ++c) rho_scaled += x(c) * basis[c];
  const double tr = rho_scaled.trace().real();
  if (!(std::abs(tr) > 0.0)) {
    throw std::runtime_error("linear reconstruction degenerate: zero total trace");
  }
  return rho_scaled / tr;
}

TomographyResult mle_reconstruct(const std::vector<MeasurementRecord>& records,
                                 std::optional<TwoPhotonState> target,
                                 const MleOptions& options) {
  Likelihood lik;
  lik.projectors.reserve(records.size());
  lik.counts.reserve(records.size());
  for (const auto& r : records) {
    lik.projectors.push_back(
        projector(r.setting.first, r.setting.second, options.flip_rl));
    const double n = effective_counts(r, options.baseline_hz);
    lik.counts.push_back(n);
    lik.total_counts += n;
  }
  if (!(lik.total_counts > 0.0)) {
    throw std::domain_error("total counts must be positive");
  }

  // Warm start from linear inversion projected onto the physical set.
  Matrix4cd rho0 = Matrix4cd::Identity() / 4.0;
  try {
    const Matrix4cd lin = linear_reconstruct(records, options.flip_rl);
    Eigen::SelfAdjointEigenSolver<Matrix4cd> es(lin);
    Eigen::Vector4d ev = es.eigenvalues().cwiseMax(1e-6);
    ev /= ev.sum();
    rho0 = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  } catch (const std::runtime_error&) {
    // fall back to the maximally mixed start
  }
  const Matrix4cd chol = Eigen::LLT<Matrix4cd>(rho0).matrixL();
  Vec16 x = params_from_factor(chol.adjoint());

  Vec16 grad;
  double ll = lik.value_and_gradient(x, &grad);
  Mat16 h_inv = Mat16::Identity();
  bool converged = false;
  int iter = 0;
  for (; iter < options.max_iterations; ++iter) {
    Vec16 dir = h_inv * grad;  // ascent direction
    if (dir.dot(grad) <= 0.0) {
      h_inv = Mat16::Identity();
      dir = grad;
    }
    double step = 1.0;
    const double slope = dir.dot(grad);
    double ll_new = ll;
    Vec16 x_new = x;
    bool improved = false;
    while (step > 1e-14) {
      x_new = x + step * dir;
      ll_new = lik.value_and_gradient(x_new, nullptr);
      if (std::isfinite(ll_new) && ll_new >= ll + 1e-4 * step * slope) {
        improved = true;
        break;
      }
      step *= 0.5;
    }
    if (!improved) {
      converged = true;  // no ascent direction improves the likelihood
      break;
    }
    Vec16 grad_new;
    lik.value_and_gradient(x_new, &grad_new);
    const Vec16 s = x_new - x;
    const Vec16 y = grad - grad_new;  // gradient of -LL increases along s
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const Vec16 hy = h_inv * y;
      const double yhy = y.dot(hy);
      h_inv += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
               (hy * s.transpose() + s * hy.transpose()) / sy;
    }
    const double rel = (ll_new - ll) / std::max(1.0, std::abs(ll));
    x = x_new;
    grad = grad_new;
    ll = ll_new;
    if (rel < options.rel_tolerance) {
      converged = true;
      ++iter;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "maximum-likelihood reconstruction did not converge after "
        << options.max_iterations << " iterations; best log-likelihood " << ll
        << ", gradient norm " << grad.norm();
    throw std::runtime_error(msg.str());
  }

  TomographyResult res;
  res.rho = rho_from_factor(factor_from_params(x));
  // symmetrize away floating-point asymmetry before reporting
  res.rho = 0.5 * (res.rho + res.rho.adjoint().eval());
  res.log_likelihood = ll;
  res.converged = converged;
  res.iterations = iter;
  res.concurrence = concurrence(res.rho);
  res.purity = purity(res.rho);
  if (target) res.fidelity_to_target = fidelity(res.rho, *target);
  return res;
}

double fidelity(const Matrix4cd& rho, const TwoPhotonState& target) {
  validate_density_matrix(rho);
  if (std::abs(target.norm_sq() - 1.0) > 1e-10) {
    throw std::invalid_argument("target state is not normalized");
  }
  const Eigen::Vector4cd v = target.vector();
  const double f = (v.adjoint() * rho * v)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

double concurrence(const Matrix4cd& rho) {
  validate_density_matrix(rho);
  const Matrix4cd& f = spin_flip();
  const Matrix4cd m = rho * f * rho.conjugate() * f;
  Eigen::ComplexEigenSolver<Matrix4cd> es(m, false);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) {
    lam[static_cast<std::size_t>(i)] =
        std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double purity(const Matrix4cd& rho) { return (rho * rho).trace().real(); }

TomographyResult pump_angle_experiment(double theta, double werner_p,
                                       double mean_total, std::uint64_t seed,
                                       const MleOptions& options) {
  if (werner_p < 0.0 || werner_p > 1.0) {
    throw std::domain_error("Werner parameter must be in [0, 1]");
  }
  const TwoPhotonState ideal = pair_state_from_pump(theta);
  const Matrix4cd pure = state_to_density_matrix(ideal);
  const Matrix4cd rho =
      werner_p * pure + (1.0 - werner_p) * Matrix4cd::Identity() / 4.0;
  const auto records = simulate_counts(rho, standard_16_settings(), mean_total,
                                       seed, options.flip_rl);
  return mle_reconstruct(records, ideal, options);
}

}  // namespace spdc
