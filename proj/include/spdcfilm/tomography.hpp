#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spdcfilm/polarization.hpp"

namespace spdc {

/// Single-qubit measurement bases. R = (H + iV)/sqrt(2), L = (H - iV)/sqrt(2);
/// a flipped handedness convention is available where labs differ.
enum class Basis { H, V, D, A, R, L };

Basis parse_basis(const std::string& label);
std::string basis_name(Basis b);

Eigen::Vector2cd basis_vector(Basis b, bool flip_rl = false);

/// Rank-1 two-qubit projector |a><a| (x) |b><b|.
Matrix4cd projector(Basis a, Basis b, bool flip_rl = false);

using Setting = std::pair<Basis, Basis>;

/// The canonical informationally complete 16-setting list for two-qubit
/// polarization tomography.
std::vector<Setting> standard_16_settings();

struct MeasurementRecord {
  Setting setting{Basis::H, Basis::H};
  std::int64_t counts = 0;
  double acquisition_time = 1.0;  // seconds
};

/// Throws std::invalid_argument unless rho is Hermitian, unit-trace and
/// positive within tolerance 1e-10.
void validate_density_matrix(const Matrix4cd& rho, double tol = 1e-10);

/// counts_k ~ Poisson(mean_total * tr(P_k rho)), deterministic per seed.
std::vector<MeasurementRecord> simulate_counts(const Matrix4cd& rho,
                                               const std::vector<Setting>& settings,
                                               double mean_total, std::uint64_t seed,
                                               bool flip_rl = false);

/// Direct linear inversion of tr(P_k rho) = n_k / N. Hermitian by
/// construction; may have negative eigenvalues. Throws std::runtime_error on
/// a singular (informationally incomplete) design matrix.
Matrix4cd linear_reconstruct(const std::vector<MeasurementRecord>& records,
                             bool flip_rl = false);

struct MleOptions {
  int max_iterations = 2000;
  double rel_tolerance = 1e-9;      // relative log-likelihood improvement
  bool flip_rl = false;
  double baseline_hz = 0.0;         // optional flat accidental subtraction
};

struct TomographyResult {
  Matrix4cd rho;
  std::optional<double> fidelity_to_target;
  double concurrence = 0.0;
  double purity = 0.0;
  double log_likelihood = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Maximum-likelihood reconstruction over rho = T^dag T / tr(T^dag T) with T
/// triangular (16 real parameters), Poisson counting likelihood, BFGS ascent
/// with backtracking line search. The result satisfies all density-matrix
/// invariants by construction. Throws std::runtime_error on non-convergence,
/// carrying the iteration diagnostics in the message.
TomographyResult mle_reconstruct(const std::vector<MeasurementRecord>& records,
                                 std::optional<TwoPhotonState> target = std::nullopt,
                                 const MleOptions& options = {});

/// Pure-target fidelity <psi| rho |psi>.
double fidelity(const Matrix4cd& rho, const TwoPhotonState& target);

/// Wootters concurrence from the spin-flipped eigenvalue spectrum.
double concurrence(const Matrix4cd& rho);

double purity(const Matrix4cd& rho);

/// End-to-end pump-angle experiment: tensor-derived state, Werner mixing with
/// parameter p, Poisson counts at mean_total per setting, MLE reconstruction,
/// metrics against the ideal state for that angle.
TomographyResult pump_angle_experiment(double theta, double werner_p,
                                       double mean_total, std::uint64_t seed,
                                       const MleOptions& options = {});

}  // namespace spdc
