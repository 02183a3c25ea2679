#include "spdcfilm/photon_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "spdcfilm/numeric.hpp"

namespace spdc {

namespace {

void append_poisson_tags(std::mt19937_64& rng, double rate, double duration,
                         TimeTagStream& out) {
  if (rate <= 0.0) return;
  std::poisson_distribution<std::int64_t> num(rate * duration);
  std::uniform_real_distribution<double> when(0.0, duration);
  const std::int64_t n = num(rng);
  for (std::int64_t i = 0; i < n; ++i) out.push_back(when(rng));
}

}  // namespace

std::pair<TimeTagStream, TimeTagStream> simulate_time_tags(
    const SourceModel& source, const DetectorModel& det1, const DetectorModel& det2,
    double power_mw, double duration_s, std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw std::domain_error("duration must be positive");
  if (power_mw < 0.0) throw std::domain_error("power must be nonnegative");
  for (const auto* d : {&det1, &det2}) {
    if (d->efficiency < 0.0 || d->efficiency > 1.0)
      throw std::domain_error("detector efficiency must be in [0, 1]");
    if (d->dark_rate < 0.0 || d->jitter_sigma < 0.0)
      throw std::domain_error("detector rates and jitter must be nonnegative");
  }

  std::mt19937_64 rng(seed);
  TimeTagStream s1, s2;

  const double pair_rate = source.pair_rate_per_mw * power_mw;
  if (pair_rate > 0.0) {
    std::poisson_distribution<std::int64_t> num(pair_rate * duration_s);
    std::uniform_real_distribution<double> when(0.0, duration_s);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    // sigma must stay positive at construction; zero-jitter paths never sample
    std::normal_distribution<double> jit1(
        0.0, det1.jitter_sigma > 0.0 ? det1.jitter_sigma : 1.0);
    std::normal_distribution<double> jit2(
        0.0, det2.jitter_sigma > 0.0 ? det2.jitter_sigma : 1.0);
    const std::int64_t n_pairs = num(rng);
    s1.reserve(static_cast<std::size_t>(n_pairs * det1.efficiency) + 16);
    s2.reserve(static_cast<std::size_t>(n_pairs * det2.efficiency) + 16);
    for (std::int64_t i = 0; i < n_pairs; ++i) {
      const double t = when(rng);
      if (coin(rng) < det1.efficiency) {
        s1.push_back(det1.jitter_sigma > 0.0 ? t + jit1(rng) : t);
      }
      if (coin(rng) < det2.efficiency) {
        s2.push_back(det2.jitter_sigma > 0.0 ? t + jit2(rng) : t);
      }
    }
  }
  append_poisson_tags(rng, source.uncorrelated_background_1 + det1.dark_rate,
                      duration_s, s1);
  append_poisson_tags(rng, source.uncorrelated_background_2 + det2.dark_rate,
                      duration_s, s2);
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  return {std::move(s1), std::move(s2)};
}

CoincidenceHistogram coincidence_histogram(const TimeTagStream& s1,
                                           const TimeTagStream& s2,
                                           double bin_width, double tau_max) {
  if (!(bin_width > 0.0)) throw std::domain_error("bin width must be positive");
  if (!(tau_max > 0.0)) throw std::domain_error("tau range must be positive");

  const std::size_t half = static_cast<std::size_t>(std::floor(tau_max / bin_width));
  const std::size_t n_bins = 2 * half + 1;  // odd, bin `half` is centered on 0
  CoincidenceHistogram h;
  h.bin_width = bin_width;
  h.counts.assign(n_bins, 0);
  h.tau_axis.resize(n_bins);
  for (std::size_t j = 0; j < n_bins; ++j) {
    h.tau_axis[j] = (static_cast<double>(j) - static_cast<double>(half)) * bin_width;
  }
  const double lo = -(static_cast<double>(half) + 0.5) * bin_width;
  const double hi = (static_cast<double>(half) + 0.5) * bin_width;

  if (!s1.empty() || !s2.empty()) {
    double t_min = std::numeric_limits<double>::infinity();
    double t_max = -std::numeric_limits<double>::infinity();
    for (const auto* s : {&s1, &s2}) {
      if (!s->empty()) {
        t_min = std::min(t_min, s->front());
        t_max = std::max(t_max, s->back());
      }
    }
    h.duration = t_max - t_min;
  }
  if (s1.empty() || s2.empty()) return h;

  std::size_t lo_idx = 0;
  for (const double t1 : s1) {
    while (lo_idx < s2.size() && s2[lo_idx] - t1 <= lo) ++lo_idx;
    for (std::size_t j = lo_idx; j < s2.size(); ++j) {
      const double tau = s2[j] - t1;
      if (tau >= hi) break;
      const long long bin =
          std::llround(tau / bin_width) + static_cast<long long>(half);
      if (bin < 0 || bin >= static_cast<long long>(n_bins)) continue;
      ++h.counts[static_cast<std::size_t>(bin)];
    }
  }
  return h;
}

G2Curve g2_from_histogram(const CoincidenceHistogram& hist,
                          double exclusion_half_width) {
  if (hist.counts.empty()) throw std::domain_error("histogram is empty");
  std::size_t n_side = 0;
  KahanSum side;
  for (std::size_t j = 0; j < hist.counts.size(); ++j) {
    if (std::abs(hist.tau_axis[j]) > exclusion_half_width) {
      side.add(static_cast<double>(hist.counts[j]));
      ++n_side;
    }
  }
  if (n_side < 5) {
    throw std::runtime_error(
        "fewer than 5 sideband bins outside the exclusion window; widen tau range");
  }
  const double baseline = side.value() / static_cast<double>(n_side);
  if (baseline <= 0.0) {
    throw std::runtime_error("insufficient accidentals; extend duration");
  }
  G2Curve g;
  g.tau_axis = hist.tau_axis;
  g.baseline = baseline;
  g.g2.resize(hist.counts.size());
  for (std::size_t j = 0; j < hist.counts.size(); ++j) {
    g.g2[j] = static_cast<double>(hist.counts[j]) / baseline;
  }
  g.g2_zero = g.g2[hist.counts.size() / 2];
  return g;
}

double analytic_g2_zero(double true_coincidence_rate, double singles_rate_1,
                        double singles_rate_2, double bin_width) {
  if (true_coincidence_rate < 0.0)
    throw std::domain_error("coincidence rate must be nonnegative");
  if (!(singles_rate_1 > 0.0) || !(singles_rate_2 > 0.0))
    throw std::domain_error("singles rates must be positive");
  if (!(bin_width > 0.0)) throw std::domain_error("bin width must be positive");
  return 1.0 + true_coincidence_rate / (singles_rate_1 * singles_rate_2 * bin_width);
}

double loss_corrected_rate(double raw_rate, const std::vector<double>& chain) {
  double t = 1.0;
  for (double x : chain) {
    if (!(x > 0.0) || x > 1.0) {
      throw std::domain_error("transmission chain elements must be in (0, 1]");
    }
    t *= x;
  }
  return raw_rate / t;
}

std::vector<PowerPoint> power_sweep(const SourceModel& source,
                                    const DetectorModel& det1,
                                    const DetectorModel& det2,
                                    const std::vector<double>& powers_mw,
                                    double duration_s, std::uint64_t seed,
                                    const SweepOptions& opts) {
  if (powers_mw.empty()) throw std::domain_error("power list must be nonempty");
  std::vector<PowerPoint> out;
  out.reserve(powers_mw.size());
  for (std::size_t i = 0; i < powers_mw.size(); ++i) {
    const auto [s1, s2] = simulate_time_tags(source, det1, det2, powers_mw[i],
                                             duration_s, seed + i);
    const auto hist = coincidence_histogram(s1, s2, opts.bin_width, opts.tau_max);
    KahanSum peak, side;
    std::size_t n_peak = 0, n_side = 0;
    for (std::size_t j = 0; j < hist.counts.size(); ++j) {
      if (std::abs(hist.tau_axis[j]) <= opts.exclusion_half_width) {
        peak.add(static_cast<double>(hist.counts[j]));
        ++n_peak;
      } else {
        side.add(static_cast<double>(hist.counts[j]));
        ++n_side;
      }
    }
    const double baseline = n_side ? side.value() / static_cast<double>(n_side) : 0.0;
    const double excess = peak.value() - baseline * static_cast<double>(n_peak);
    out.push_back({powers_mw[i], excess / duration_s});
  }
  return out;
}

}  // namespace spdc
