#include "spdcfilm/spdc_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "spdcfilm/constants.hpp"
#include "spdcfilm/numeric.hpp"

namespace spdc {

namespace {

void check_energy_conservation(double omega_s, double omega_p) {
  if (!(omega_s > 0.0)) {
    throw std::domain_error("signal frequency must be positive");
  }
  if (omega_s >= omega_p) {
    throw std::domain_error("idler frequency nonpositive");
  }
}

struct KineticContext {
  double k_p;
  double length;
  double chi2_sq;
  double waist;
  const DispersionModel* model;

  KineticContext(const NonlinearFilm& film, const PumpBeam& pump)
      : k_p(film.dispersion.wavevector(omega_from_lambda_nm(pump.lambda_nm))),
        length(film.thickness()),
        chi2_sq(film.chi2 * film.chi2),
        waist(pump.waist),
        model(&film.dispersion) {
    if (!(pump.waist > 0.0)) throw std::domain_error("pump waist must be positive");
  }

  double density(double k_s, double k_i, double theta_s, double theta_i) const {
    const double dk_par = k_p - k_s * std::cos(theta_s) - k_i * std::cos(theta_i);
    const double dk_perp = k_s * std::sin(theta_s) + k_i * std::sin(theta_i);
    return chi2_sq * length * length * sinc_sq(dk_par * length) *
           pump_factor(dk_perp, waist);
  }
};

std::array<double, 2> band_to_omega(const std::array<double, 2>& band_nm) {
  if (!(band_nm[0] > 0.0) || !(band_nm[1] > band_nm[0])) {
    throw std::domain_error("wavelength band must satisfy 0 < min < max");
  }
  return {omega_from_lambda_nm(band_nm[1]), omega_from_lambda_nm(band_nm[0])};
}

}  // namespace

EmissionDirection EmissionDirection::from(double raw) {
  double t = std::remainder(raw, 2.0 * kPi);  // (-pi, pi]
  if (t <= -kPi) t = kPi;
  return {t};
}

Mismatch mismatch(const NonlinearFilm& film, const PumpBeam& pump,
                  double omega_s, double theta_s, double theta_i) {
  const double omega_p = omega_from_lambda_nm(pump.lambda_nm);
  check_energy_conservation(omega_s, omega_p);
  const double omega_i = omega_p - omega_s;
  const auto& d = film.dispersion;
  const double k_p = d.wavevector(omega_p);
  const double k_s = d.wavevector(omega_s);
  const double k_i = d.wavevector(omega_i);
  Mismatch m;
  m.parallel = k_p - k_s * std::cos(theta_s) - k_i * std::cos(theta_i);
  m.perp = k_s * std::sin(theta_s) + k_i * std::sin(theta_i);
  return m;
}

double phase_matching_factor(double dk_par, double length) {
  if (!(length > 0.0)) throw std::domain_error("film length must be positive");
  return sinc_sq(dk_par * length);
}

double pump_factor(double dk_perp, double waist) {
  if (!(waist > 0.0)) throw std::domain_error("pump waist must be positive");
  const double a = dk_perp * waist;
  return std::exp(-0.5 * a * a);
}

double pair_rate_density(const NonlinearFilm& film, const PumpBeam& pump,
                         double omega_s, double theta_s, double theta_i) {
  const Mismatch m = mismatch(film, pump, omega_s, theta_s, theta_i);
  const double L = film.thickness();
  return film.chi2 * film.chi2 * L * L *
         phase_matching_factor(m.parallel, L) * pump_factor(m.perp, pump.waist);
}

JointRateGrid sample_joint_grid(const NonlinearFilm& film, const PumpBeam& pump,
                                const std::vector<double>& omega_s_axis,
                                const std::vector<double>& theta_s_axis,
                                const std::vector<double>& theta_i_axis) {
  if (omega_s_axis.empty() || theta_s_axis.empty() || theta_i_axis.empty()) {
    throw std::domain_error("joint grid axes must be nonempty");
  }
  for (const auto* axis : {&omega_s_axis, &theta_s_axis, &theta_i_axis}) {
    for (std::size_t i = 1; i < axis->size(); ++i) {
      if (!((*axis)[i] > (*axis)[i - 1])) {
        throw std::domain_error("joint grid axes must be strictly increasing");
      }
    }
  }
  const double omega_p = omega_from_lambda_nm(pump.lambda_nm);
  const KineticContext ctx(film, pump);
  JointRateGrid g;
  g.omega_s_axis = omega_s_axis;
  g.theta_s_axis = theta_s_axis;
  g.theta_i_axis = theta_i_axis;
  g.values.resize(omega_s_axis.size() * theta_s_axis.size() * theta_i_axis.size());
  std::size_t idx = 0;
  for (double omega_s : omega_s_axis) {
    check_energy_conservation(omega_s, omega_p);
    const double k_s = ctx.model->wavevector(omega_s);
    const double k_i = ctx.model->wavevector(omega_p - omega_s);
    for (double ts : theta_s_axis) {
      for (double ti : theta_i_axis) {
        g.values[idx++] = ctx.density(k_s, k_i, ts, ti);
      }
    }
  }
  return g;
}

Grid2D frequency_angular_spectrum(const NonlinearFilm& film, const PumpBeam& pump,
                                  const std::vector<double>& omega_axis,
                                  const std::vector<double>& theta_axis,
                                  std::size_t n_theta_i) {
  if (omega_axis.empty() || theta_axis.empty()) {
    throw std::domain_error("spectrum axes must be nonempty");
  }
  const double omega_p = omega_from_lambda_nm(pump.lambda_nm);
  const KineticContext ctx(film, pump);
  const std::vector<double> thi = circle_midpoints(n_theta_i);
  const double h_i = 2.0 * kPi / static_cast<double>(n_theta_i);

  Grid2D g;
  g.omega_axis = omega_axis;
  g.theta_axis = theta_axis;
  g.values.resize(omega_axis.size() * theta_axis.size());
  for (std::size_t i = 0; i < omega_axis.size(); ++i) {
    const double omega_s = omega_axis[i];
    check_energy_conservation(omega_s, omega_p);
    const double k_s = ctx.model->wavevector(omega_s);
    const double k_i = ctx.model->wavevector(omega_p - omega_s);
    for (std::size_t j = 0; j < theta_axis.size(); ++j) {
      KahanSum acc;
      for (double ti : thi) acc.add(ctx.density(k_s, k_i, theta_axis[j], ti));
      g.at(i, j) = acc.value() * h_i;
    }
  }
  return g;
}

AngularProfiles angular_emission_profile(const NonlinearFilm& film,
                                         const PumpBeam& pump,
                                         const std::array<double, 2>& band_nm,
                                         std::size_t n_theta, std::size_t n_omega) {
  const auto omega_band = band_to_omega(band_nm);
  const double omega_p = omega_from_lambda_nm(pump.lambda_nm);
  const KineticContext ctx(film, pump);

  AngularProfiles p;
  p.theta_axis = circle_midpoints(n_theta);
  p.signal.assign(n_theta, 0.0);
  p.idler.assign(n_theta, 0.0);
  const double h_th = 2.0 * kPi / static_cast<double>(n_theta);

  const std::vector<double> omegas = linspace(omega_band[0], omega_band[1], n_omega);
  const double h_om = (omega_band[1] - omega_band[0]) /
                      static_cast<double>(n_omega - 1);

  std::vector<KahanSum> sig(n_theta), idl(n_theta);
  for (std::size_t i = 0; i < n_omega; ++i) {
    const double w_om = trapezoid_weight(i, n_omega);
    // signal in band: omega_s = omegas[i]; idler in band: omega_s = omega_p - omegas[i]
    for (int swap = 0; swap < 2; ++swap) {
      const double omega_s = swap ? omega_p - omegas[i] : omegas[i];
      check_energy_conservation(omega_s, omega_p);
      const double k_s = ctx.model->wavevector(omega_s);
      const double k_i = ctx.model->wavevector(omega_p - omega_s);
      for (std::size_t j = 0; j < n_theta; ++j) {
        KahanSum inner;
        for (std::size_t k = 0; k < n_theta; ++k) {
          // marginalize the partner angle on the full circle
          const double partner = p.theta_axis[k];
          if (swap == 0) {
            inner.add(ctx.density(k_s, k_i, p.theta_axis[j], partner));
          } else {
            inner.add(ctx.density(k_s, k_i, partner, p.theta_axis[j]));
          }
        }
        (swap == 0 ? sig[j] : idl[j]).add(w_om * inner.value() * h_th * h_om);
      }
    }
  }
  for (std::size_t j = 0; j < n_theta; ++j) {
    p.signal[j] = sig[j].value();
    p.idler[j] = idl[j].value();
  }
  auto normalize = [](std::vector<double>& v) {
    const double m = *std::max_element(v.begin(), v.end());
    if (m > 0.0) {
      for (double& x : v) x /= m;
    }
  };
  normalize(p.signal);
  normalize(p.idler);
  return p;
}

ScenarioRates scenario_rates(const NonlinearFilm& film, const PumpBeam& pump,
                             const DetectionWindow& forward_window,
                             const DetectionWindow& backward_window,
                             const ScenarioGrid& grid) {
  if (!(forward_window.full_width > 0.0) || !(backward_window.full_width > 0.0)) {
    throw std::domain_error("detection window width must be positive");
  }
  const auto omega_band = band_to_omega(forward_window.band_nm);
  const double omega_p = omega_from_lambda_nm(pump.lambda_nm);
  const KineticContext ctx(film, pump);

  const std::vector<double> omegas = linspace(omega_band[0], omega_band[1], grid.n_omega);
  const double h_om = (omega_band[1] - omega_band[0]) /
                      static_cast<double>(grid.n_omega - 1);

  struct Box {
    double center;
    double width;
  };
  const Box fwd{forward_window.center, forward_window.full_width};
  const Box bwd{backward_window.center, backward_window.full_width};

  auto integrate = [&](const Box& sig_box, const Box& idl_box) {
    const std::vector<double> off_s =
        linspace(-sig_box.width / 2.0, sig_box.width / 2.0, grid.n_theta);
    const std::vector<double> off_i =
        linspace(-idl_box.width / 2.0, idl_box.width / 2.0, grid.n_theta);
    const double h_s = sig_box.width / static_cast<double>(grid.n_theta - 1);
    const double h_i = idl_box.width / static_cast<double>(grid.n_theta - 1);
    KahanSum total;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      const double omega_s = omegas[i];
      check_energy_conservation(omega_s, omega_p);
      const double k_s = ctx.model->wavevector(omega_s);
      const double k_i = ctx.model->wavevector(omega_p - omega_s);
      const double w_om = trapezoid_weight(i, omegas.size());
      for (std::size_t j = 0; j < off_s.size(); ++j) {
        const double ts = sig_box.center + off_s[j];
        const double w_s = trapezoid_weight(j, off_s.size());
        for (std::size_t k = 0; k < off_i.size(); ++k) {
          const double ti = idl_box.center + off_i[k];
          const double w_i = trapezoid_weight(k, off_i.size());
          total.add(w_om * w_s * w_i * ctx.density(k_s, k_i, ts, ti));
        }
      }
    }
    return total.value() * h_om * h_s * h_i;
  };

  ScenarioRates r;
  r.ff = integrate(fwd, fwd);
  r.fb = integrate(fwd, bwd);
  r.bf = integrate(bwd, fwd);
  r.bb = integrate(bwd, bwd);
  return r;
}

double counter_to_co_ratio(const ScenarioRates& rates) {
  if (rates.ff < 0.0 || rates.fb < 0.0 || rates.bf < 0.0 || rates.bb < 0.0) {
    throw std::domain_error("scenario rates must be nonnegative");
  }
  if (rates.ff == 0.0) return std::numeric_limits<double>::infinity();
  return (rates.fb + rates.bf) / rates.ff;
}

BandwidthResult emission_bandwidth(const NonlinearFilm& film, const PumpBeam& pump,
                                   double collection_full_width,
                                   const BandwidthOptions& opts) {
  if (!(collection_full_width > 0.0)) {
    throw std::domain_error("collection width must be positive");
  }
  const double omega_p = omega_from_lambda_nm(pump.lambda_nm);
  const double nu_p = thz_from_omega(omega_p);
  const double nu_d = nu_p / 2.0;
  const KineticContext ctx(film, pump);
  const double half_angle = collection_full_width / 2.0;
  const double w0 = pump.waist;
  const double L = ctx.length;

  std::size_t n_nu = opts.n_nu | 1;  // odd, so the degenerate frequency is sampled
  BandwidthResult res;
  res.nu_thz = linspace(nu_d - opts.span_thz / 2.0, nu_d + opts.span_thz / 2.0, n_nu);
  res.density.resize(n_nu);

  for (std::size_t j = 0; j < n_nu; ++j) {
    const double nu_s = res.nu_thz[j];
    const double nu_i = nu_p - nu_s;
    const double omega_s = omega_from_thz(nu_s);
    check_energy_conservation(omega_s, omega_p);
    const double k_s = ctx.model->wavevector(omega_s);
    const double k_i = ctx.model->wavevector(omega_p - omega_s);
    const double qs_max = k_s * std::sin(half_angle);
    const double qi_max = k_i * std::sin(half_angle);
    const double h_s = qs_max / static_cast<double>(opts.n_q - 1);
    const double h_i = qi_max / static_cast<double>(opts.n_q - 1);
    KahanSum acc;
    for (std::size_t a = 0; a < opts.n_q; ++a) {
      const double qs = static_cast<double>(a) * h_s;
      const double kzs = std::sqrt(k_s * k_s - qs * qs);
      const double w_a = trapezoid_weight(a, opts.n_q);
      for (std::size_t b = 0; b < opts.n_q; ++b) {
        const double qi = static_cast<double>(b) * h_i;
        const double kzi = std::sqrt(k_i * k_i - qi * qi);
        const double dk_par = ctx.k_p - kzs - kzi;
        const double dq = (qs - qi) * w0;
        const double kernel = sinc_sq(dk_par * L) *
                              std::exp(-0.5 * dq * dq) * i0e(w0 * w0 * qs * qi) *
                              qs * qi;
        acc.add(w_a * trapezoid_weight(b, opts.n_q) * kernel);
      }
    }
    const double cones = acc.value() * h_s * h_i / (k_s * k_s * k_i * k_i);
    const double dos = (nu_s * nu_i) * (nu_s * nu_i);  // per-photon mode density
    res.density[j] = dos * cones * ctx.chi2_sq * L * L * 2.0 * kPi;
  }

  const std::size_t center = n_nu / 2;
  const double s0 = res.density[center];
  if (!(s0 > 0.0)) {
    throw std::runtime_error("degenerate spectral density vanished; check inputs");
  }
  for (double& v : res.density) v /= s0;

  auto cross_out = [&](long dir) -> double {
    long j = static_cast<long>(center);
    while (true) {
      long next = j + dir;
      if (next < 0 || next >= static_cast<long>(n_nu)) {
        std::ostringstream msg;
        msg << "no half-maximum crossing inside the computed +/-"
            << opts.span_thz / 2.0 << " THz span; widen the frequency grid";
        throw std::runtime_error(msg.str());
      }
      if (res.density[next] < 0.5) {
        const double x0 = res.nu_thz[j], x1 = res.nu_thz[next];
        const double y0 = res.density[j], y1 = res.density[next];
        return x0 + (0.5 - y0) * (x1 - x0) / (y1 - y0);
      }
      j = next;
    }
  };
  res.nu_lo_thz = cross_out(-1);
  res.nu_hi_thz = cross_out(+1);
  res.fwhm_thz = res.nu_hi_thz - res.nu_lo_thz;
  const double c_nm_thz = kSpeedOfLight * 1e-3;  // 299792.458 nm THz
  res.lambda_span_nm = c_nm_thz / res.nu_lo_thz - c_nm_thz / res.nu_hi_thz;
  return res;
}

double correlation_time_fs(double bandwidth_thz) {
  if (!(bandwidth_thz > 0.0)) {
    throw std::domain_error("bandwidth must be positive");
  }
  return 1e3 / (kPi * bandwidth_thz);
}

double detection_angle_from_na(const DispersionModel& model, double na,
                               double lambda_nm) {
  if (na < 0.0) throw std::domain_error("numerical aperture must be nonnegative");
  const double n = model.refractive_index(lambda_nm);
  if (na >= n) {
    std::ostringstream msg;
    msg << "numerical aperture " << na << " must be below the medium index " << n;
    throw std::domain_error(msg.str());
  }
  return na / n;
}

}  // namespace spdc
