#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace spdc {

struct DetectorModel {
  double efficiency = 1.0;     // [0, 1]
  double dark_rate = 0.0;      // Hz
  double jitter_sigma = 0.0;   // seconds, Gaussian
};

struct SourceModel {
  double pair_rate_per_mw = 0.0;       // Hz/mW
  double uncorrelated_background_1 = 0.0;  // Hz on detector 1
  double uncorrelated_background_2 = 0.0;  // Hz on detector 2
};

/// Arrival times in seconds, nondecreasing.
using TimeTagStream = std::vector<double>;

/// Monte Carlo pair source in a two-detector (HBT) topology. Pair events are
/// Poisson at pair_rate_per_mw * power; each pair fires detector k with its
/// efficiency and Gaussian time jitter; dark and background tags are
/// independent Poisson processes. Deterministic for a fixed seed.
std::pair<TimeTagStream, TimeTagStream> simulate_time_tags(
    const SourceModel& source, const DetectorModel& det1, const DetectorModel& det2,
    double power_mw, double duration_s, std::uint64_t seed);

struct CoincidenceHistogram {
  double bin_width = 0.0;            // seconds
  std::vector<double> tau_axis;      // bin centers, symmetric about 0
  std::vector<std::uint64_t> counts;
  double duration = 0.0;             // seconds covered by the input streams
};

/// Start-stop correlation: counts every cross pair with t2 - t1 inside the
/// symmetric window [-tau_max, tau_max]. Empty streams give a zero histogram.
CoincidenceHistogram coincidence_histogram(const TimeTagStream& s1,
                                           const TimeTagStream& s2,
                                           double bin_width, double tau_max);

struct G2Curve {
  std::vector<double> tau_axis;  // seconds
  std::vector<double> g2;
  double g2_zero = 0.0;
  double baseline = 0.0;  // accidental counts per bin
};

/// Normalizes a histogram by the mean of its sideband bins (|tau| above the
/// exclusion half-width). Throws std::runtime_error when the baseline is zero
/// or fewer than 5 sideband bins remain.
G2Curve g2_from_histogram(const CoincidenceHistogram& hist,
                          double exclusion_half_width);

/// 1 + Rc / (R1 R2 dt): Poisson accidental-rate oracle for g2(0).
double analytic_g2_zero(double true_coincidence_rate, double singles_rate_1,
                        double singles_rate_2, double bin_width);

/// raw_rate / product(transmissions); each element must be in (0, 1].
double loss_corrected_rate(double raw_rate, const std::vector<double>& chain);

struct PowerPoint {
  double power_mw = 0.0;
  double coincidence_rate = 0.0;  // background-subtracted peak rate, Hz
};

struct SweepOptions {
  double bin_width = 1e-9;
  double tau_max = 100e-9;
  double exclusion_half_width = 5e-9;
};

/// Simulates one run per pump power and integrates the coincidence peak above
/// the accidental baseline.
std::vector<PowerPoint> power_sweep(const SourceModel& source,
                                    const DetectorModel& det1,
                                    const DetectorModel& det2,
                                    const std::vector<double>& powers_mw,
                                    double duration_s, std::uint64_t seed,
                                    const SweepOptions& opts = {});

}  // namespace spdc
