#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "spdcfilm/numeric.hpp"
#include "spdcfilm/photon_stats.hpp"

using namespace spdc;
using doctest::Approx;

TEST_SUITE_BEGIN("photon_stats");

TEST_CASE("time-tag simulation") {
  SUBCASE("silent source produces empty streams") {
    const SourceModel src{0.0, 0.0, 0.0};
    const DetectorModel det{1.0, 0.0, 0.0};
    const auto [s1, s2] = simulate_time_tags(src, det, det, 40.0, 10.0, 3);
    CHECK(s1.empty());
    CHECK(s2.empty());
  }
  SUBCASE("lossless noiseless pairs give identical streams") {
    const SourceModel src{10.0, 0.0, 0.0};
    const DetectorModel det{1.0, 0.0, 0.0};
    const auto [s1, s2] = simulate_time_tags(src, det, det, 10.0, 50.0, 5);
    REQUIRE(s1.size() == s2.size());
    CHECK(s1 == s2);
    // Poisson count: mean 5000, allow 5 sigma
    CHECK(std::abs(static_cast<double>(s1.size()) - 5000.0) < 5.0 * std::sqrt(5000.0));
    CHECK(std::is_sorted(s1.begin(), s1.end()));
  }
  SUBCASE("singles rates match pair*efficiency + dark + background within 3 sigma") {
    const SourceModel src{20.0, 150.0, 40.0};
    const DetectorModel d1{0.6, 30.0, 0.0};
    const DetectorModel d2{0.25, 10.0, 0.0};
    const double T = 100.0;
    const auto [s1, s2] = simulate_time_tags(src, d1, d2, 10.0, T, 17);
    const double exp1 = (20.0 * 10.0 * 0.6 + 150.0 + 30.0) * T;
    const double exp2 = (20.0 * 10.0 * 0.25 + 40.0 + 10.0) * T;
    CHECK(std::abs(static_cast<double>(s1.size()) - exp1) < 3.0 * std::sqrt(exp1));
    CHECK(std::abs(static_cast<double>(s2.size()) - exp2) < 3.0 * std::sqrt(exp2));
  }
  SUBCASE("identical seeds reproduce streams bit-exactly") {
    const SourceModel src{50.0, 300.0, 200.0};
    const DetectorModel det{0.5, 100.0, 0.4e-9};
    const auto a = simulate_time_tags(src, det, det, 20.0, 30.0, 99);
    const auto b = simulate_time_tags(src, det, det, 20.0, 30.0, 99);
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
  }
  SUBCASE("input validation") {
    const SourceModel src{1.0, 0.0, 0.0};
    const DetectorModel det{1.0, 0.0, 0.0};
    CHECK_THROWS_AS(simulate_time_tags(src, det, det, 1.0, 0.0, 1),
                    std::domain_error);
    CHECK_THROWS_AS(simulate_time_tags(src, det, det, -1.0, 1.0, 1),
                    std::domain_error);
    const DetectorModel bad{1.5, 0.0, 0.0};
    CHECK_THROWS_AS(simulate_time_tags(src, bad, det, 1.0, 1.0, 1),
                    std::domain_error);
  }
}

TEST_CASE("coincidence histogram") {
  SUBCASE("identical streams pile up in the zero bin") {
    TimeTagStream s;
    for (int i = 0; i < 1000; ++i) s.push_back(0.001 * i);
    const auto h = coincidence_histogram(s, s, 1e-9, 50e-9);
    CHECK(h.counts[h.counts.size() / 2] == 1000);
    CHECK(h.tau_axis[h.counts.size() / 2] == Approx(0.0));
  }
  SUBCASE("a shifted copy moves the peak by the shift") {
    TimeTagStream s1, s2;
    const double shift = 7e-9;
    for (int i = 0; i < 500; ++i) {
      s1.push_back(0.002 * i);
      s2.push_back(0.002 * i + shift);
    }
    const auto h = coincidence_histogram(s1, s2, 1e-9, 50e-9);
    std::size_t peak = 0;
    for (std::size_t j = 1; j < h.counts.size(); ++j) {
      if (h.counts[j] > h.counts[peak]) peak = j;
    }
    CHECK(h.tau_axis[peak] == Approx(shift));
  }
  SUBCASE("independent Poisson streams show the accidental rate per bin") {
    const SourceModel src{0.0, 5000.0, 5000.0};
    const DetectorModel det{1.0, 0.0, 0.0};
    const double T = 400.0;
    const auto [s1, s2] = simulate_time_tags(src, det, det, 0.0, T, 23);
    const auto h = coincidence_histogram(s1, s2, 2e-9, 40e-9);
    const double expected = 5000.0 * 5000.0 * 2e-9 * T;
    for (std::size_t j = 0; j < h.counts.size(); ++j) {
      CHECK(std::abs(static_cast<double>(h.counts[j]) - expected) <
            4.0 * std::sqrt(expected));
    }
  }
  SUBCASE("empty streams give an all-zero histogram, not an error") {
    const auto h = coincidence_histogram({}, {}, 1e-9, 10e-9);
    for (auto c : h.counts) CHECK(c == 0);
    CHECK(h.duration == 0.0);
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(coincidence_histogram({}, {}, 0.0, 1e-9), std::domain_error);
    CHECK_THROWS_AS(coincidence_histogram({}, {}, 1e-9, 0.0), std::domain_error);
  }
}

TEST_CASE("g2 normalization") {
  SUBCASE("uncorrelated light sits at unity") {
    const SourceModel src{0.0, 10000.0, 10000.0};
    const DetectorModel det{1.0, 0.0, 0.0};
    const auto [s1, s2] = simulate_time_tags(src, det, det, 0.0, 1000.0, 31);
    const auto h = coincidence_histogram(s1, s2, 10e-9, 100e-9);
    const auto g = g2_from_histogram(h, 15e-9);
    for (double v : g.g2) CHECK(v == Approx(1.0).epsilon(0.1));
  }
  SUBCASE("pair source matches the analytic oracle within 5 percent") {
    const double pair_rate = 12.0;  // Hz/mW * 10 mW = 120 Hz
    const SourceModel src{pair_rate, 20000.0, 21000.0};
    const DetectorModel det{1.0, 0.0, 0.0};
    const double power = 10.0, T = 600.0, bin = 1e-9;
    const auto [s1, s2] = simulate_time_tags(src, det, det, power, T, 41);
    const auto h = coincidence_histogram(s1, s2, bin, 100e-9);
    const auto g = g2_from_histogram(h, 3e-9);
    const double rc = pair_rate * power;
    const double r1 = rc + 20000.0, r2 = rc + 21000.0;
    CHECK(g.g2_zero == Approx(analytic_g2_zero(rc, r1, r2, bin)).epsilon(0.05));
  }
  SUBCASE("doubling the background lowers g2(0)") {
    const DetectorModel det{1.0, 0.0, 0.0};
    auto run = [&](double bg) {
      const SourceModel src{10.0, bg, bg};
      const auto [s1, s2] = simulate_time_tags(src, det, det, 10.0, 400.0, 53);
      const auto h = coincidence_histogram(s1, s2, 1e-9, 100e-9);
      return g2_from_histogram(h, 3e-9).g2_zero;
    };
    CHECK(run(4000.0) < run(2000.0));
  }
  SUBCASE("insufficient accidentals raise an actionable error") {
    TimeTagStream s{1.0, 2.0, 3.0};
    const auto h = coincidence_histogram(s, s, 1e-9, 20e-9);
    CHECK_THROWS_WITH_AS(g2_from_histogram(h, 2e-9),
                         doctest::Contains("extend duration"), std::runtime_error);
  }
  SUBCASE("needs at least 5 sideband bins") {
    TimeTagStream s{1.0, 2.0};
    const auto h = coincidence_histogram(s, s, 1e-9, 3e-9);
    CHECK_THROWS_AS(g2_from_histogram(h, 2.9e-9), std::runtime_error);
  }
}

TEST_CASE("analytic g2 oracle") {
  CHECK(analytic_g2_zero(0.0, 100.0, 100.0, 1e-9) == Approx(1.0));
  CHECK(analytic_g2_zero(8.4, 2000.0, 2000.0, 1e-9) == Approx(2101.0));
  // halving the bin doubles g2-1
  const double a = analytic_g2_zero(10.0, 500.0, 500.0, 2e-9) - 1.0;
  const double b = analytic_g2_zero(10.0, 500.0, 500.0, 1e-9) - 1.0;
  CHECK(b == Approx(2.0 * a));
  CHECK_THROWS_AS(analytic_g2_zero(1.0, 0.0, 100.0, 1e-9), std::domain_error);
}

TEST_CASE("loss correction") {
  CHECK(loss_corrected_rate(3.3, {1.0}) == Approx(3.3));
  CHECK(loss_corrected_rate(2.1, {0.5, 0.5}) == Approx(8.4));
  CHECK(loss_corrected_rate(2.1, {0.5, 0.25}) ==
        Approx(loss_corrected_rate(2.1, {0.25, 0.5})));
  CHECK_THROWS_AS(loss_corrected_rate(1.0, {0.5, 0.0}), std::domain_error);
  CHECK_THROWS_AS(loss_corrected_rate(1.0, {1.5}), std::domain_error);
}

TEST_CASE("power sweep") {
  const DetectorModel det{0.5, 50.0, 0.2e-9};
  const SourceModel src{10.0, 200.0, 200.0};

  SUBCASE("rates grow linearly with power") {
    const auto pts = power_sweep(src, det, det, {5.0, 10.0, 20.0, 30.0, 40.0},
                                 300.0, 7);
    std::vector<double> xs, ys;
    for (const auto& p : pts) {
      xs.push_back(p.power_mw);
      ys.push_back(p.coincidence_rate);
    }
    const auto fit = fit_linear(xs, ys);
    CHECK(fit.r_squared >= 0.99);
    // detected slope = pair_rate_per_mw * eta1 * eta2
    CHECK(fit.slope == Approx(10.0 * 0.25).epsilon(0.1));
  }
  SUBCASE("zero power stays at zero within accidental noise") {
    const auto pts = power_sweep(src, det, det, {0.0}, 200.0, 11);
    const double acc_per_bin = (200.0 + 50.0) * (200.0 + 50.0) * 1e-9 * 200.0;
    const double sigma = std::sqrt(acc_per_bin * 11.0) / 200.0;  // 11 peak bins
    CHECK(std::abs(pts[0].coincidence_rate) < 3.0 * sigma + 1e-9);
  }
  SUBCASE("empty power list rejected") {
    CHECK_THROWS_AS(power_sweep(src, det, det, {}, 1.0, 1), std::domain_error);
  }
  SUBCASE("peak area scales with the efficiency product") {
    const SourceModel clean{50.0, 0.0, 0.0};
    const DetectorModel full{1.0, 0.0, 0.0};
    const DetectorModel half{0.5, 0.0, 0.0};
    const auto a = power_sweep(clean, full, full, {10.0}, 200.0, 13);
    const auto b = power_sweep(clean, half, half, {10.0}, 200.0, 13);
    CHECK(b[0].coincidence_rate / a[0].coincidence_rate == Approx(0.25).epsilon(0.1));
  }
}

TEST_SUITE_END();
