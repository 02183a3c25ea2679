// pybind11 surface over the core operations; plain containers in, plain
// containers out, so the module has no numpy dependency.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <vector>

#include "spdcfilm/constants.hpp"
#include "spdcfilm/dispersion.hpp"
#include "spdcfilm/photon_stats.hpp"
#include "spdcfilm/polarization.hpp"
#include "spdcfilm/spdc_model.hpp"
#include "spdcfilm/tomography.hpp"

namespace py = pybind11;

namespace {

using Complex = std::complex<double>;
using RhoList = std::vector<std::vector<Complex>>;

RhoList rho_to_list(const spdc::Matrix4cd& rho) {
  RhoList out(4, std::vector<Complex>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = rho(i, j);
  return out;
}

spdc::Matrix4cd rho_from_list(const RhoList& rows) {
  if (rows.size() != 4) throw std::invalid_argument("rho must be 4x4");
  spdc::Matrix4cd m;
  for (int i = 0; i < 4; ++i) {
    if (rows[i].size() != 4) throw std::invalid_argument("rho must be 4x4");
    for (int j = 0; j < 4; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

spdc::TwoPhotonState state_from_list(const std::vector<Complex>& amps) {
  if (amps.size() != 4)
    throw std::invalid_argument("state needs 4 amplitudes (HH, HV, VH, VV)");
  spdc::TwoPhotonState s;
  for (int i = 0; i < 4; ++i) s.amplitudes[static_cast<std::size_t>(i)] = amps[i];
  return s;
}

std::vector<spdc::MeasurementRecord> records_from_list(
    const std::vector<std::tuple<std::string, std::string, long long>>& rows) {
  std::vector<spdc::MeasurementRecord> records;
  records.reserve(rows.size());
  for (const auto& [b1, b2, counts] : rows) {
    records.push_back(
        {{spdc::parse_basis(b1), spdc::parse_basis(b2)}, counts, 1.0});
  }
  return records;
}

py::dict result_to_dict(const spdc::TomographyResult& r) {
  py::dict d;
  d["rho"] = rho_to_list(r.rho);
  d["concurrence"] = r.concurrence;
  d["purity"] = r.purity;
  d["log_likelihood"] = r.log_likelihood;
  d["converged"] = r.converged;
  d["iterations"] = r.iterations;
  if (r.fidelity_to_target) d["fidelity"] = *r.fidelity_to_target;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Non-phase-matched SPDC simulator core (thin films)";

  py::class_<spdc::DispersionModel>(m, "DispersionModel")
      .def(py::init([](std::vector<double> coefficients, double min_nm,
                       double max_nm) {
             spdc::DispersionModel d;
             d.coefficients = std::move(coefficients);
             d.valid_range_nm = {min_nm, max_nm};
             return d;
           }),
           py::arg("coefficients"), py::arg("min_nm"), py::arg("max_nm"))
      .def_static("gase_ordinary", &spdc::DispersionModel::gase_ordinary)
      .def_static("constant_index", &spdc::DispersionModel::constant_index,
                  py::arg("n"), py::arg("min_nm") = 100.0,
                  py::arg("max_nm") = 20000.0)
      .def("refractive_index", &spdc::DispersionModel::refractive_index,
           py::arg("lambda_nm"))
      .def("wavevector", &spdc::DispersionModel::wavevector, py::arg("omega"))
      .def_readonly("name", &spdc::DispersionModel::name);

  py::class_<spdc::NonlinearFilm>(m, "NonlinearFilm")
      .def(py::init([](int layer_count, double chi2,
                       std::optional<spdc::DispersionModel> dispersion) {
             spdc::NonlinearFilm f;
             f.layer_count = layer_count;
             f.chi2 = chi2;
             if (dispersion) f.dispersion = *dispersion;
             return f;
           }),
           py::arg("layer_count") = 1, py::arg("chi2") = 1.0,
           py::arg("dispersion") = std::nullopt)
      .def_readwrite("layer_count", &spdc::NonlinearFilm::layer_count)
      .def_readwrite("chi2", &spdc::NonlinearFilm::chi2)
      .def("thickness", &spdc::NonlinearFilm::thickness);

  py::class_<spdc::PumpBeam>(m, "PumpBeam")
      .def(py::init([](double lambda_nm, double waist_um, double power_mw,
                       double theta) {
             return spdc::PumpBeam{lambda_nm, waist_um * 1e-6, power_mw * 1e-3,
                                   theta};
           }),
           py::arg("lambda_nm") = 775.0, py::arg("waist_um") = 10.0,
           py::arg("power_mw") = 40.0, py::arg("theta") = 0.0)
      .def_readwrite("lambda_nm", &spdc::PumpBeam::lambda_nm)
      .def_readwrite("theta", &spdc::PumpBeam::theta);

  m.def("layers_to_thickness", &spdc::layers_to_thickness, py::arg("layer_count"));
  m.def(
      "coherence_length",
      [](const spdc::NonlinearFilm& film, double lambda_pump_nm) {
        const auto lc = spdc::coherence_length(film, lambda_pump_nm);
        return lc.infinite ? std::numeric_limits<double>::infinity() : lc.length;
      },
      py::arg("film"), py::arg("lambda_pump_nm"));

  m.def(
      "mismatch",
      [](const spdc::NonlinearFilm& film, const spdc::PumpBeam& pump,
         double omega_s, double theta_s, double theta_i) {
        const auto mm = spdc::mismatch(film, pump, omega_s, theta_s, theta_i);
        return py::make_tuple(mm.parallel, mm.perp);
      },
      py::arg("film"), py::arg("pump"), py::arg("omega_s"), py::arg("theta_s"),
      py::arg("theta_i"));
  m.def("phase_matching_factor", &spdc::phase_matching_factor, py::arg("dk_par"),
        py::arg("length"));
  m.def("pump_factor", &spdc::pump_factor, py::arg("dk_perp"), py::arg("waist"));
  m.def("pair_rate_density", &spdc::pair_rate_density, py::arg("film"),
        py::arg("pump"), py::arg("omega_s"), py::arg("theta_s"),
        py::arg("theta_i"));

  m.def(
      "scenario_rates",
      [](const spdc::NonlinearFilm& film, const spdc::PumpBeam& pump,
         double full_width, double band_lo_nm, double band_hi_nm) {
        spdc::DetectionWindow fwd{0.0, full_width, {band_lo_nm, band_hi_nm}};
        spdc::DetectionWindow bwd{spdc::kPi, full_width, {band_lo_nm, band_hi_nm}};
        const auto r = spdc::scenario_rates(film, pump, fwd, bwd);
        py::dict d;
        d["ff"] = r.ff;
        d["fb"] = r.fb;
        d["bf"] = r.bf;
        d["bb"] = r.bb;
        d["ratio"] = spdc::counter_to_co_ratio(r);
        return d;
      },
      py::arg("film"), py::arg("pump"), py::arg("full_width") = 0.2,
      py::arg("band_lo_nm") = 1460.0, py::arg("band_hi_nm") = 1650.0);

  m.def(
      "emission_bandwidth",
      [](const spdc::NonlinearFilm& film, const spdc::PumpBeam& pump,
         double collection_full_width) {
        const auto bw = spdc::emission_bandwidth(film, pump, collection_full_width);
        py::dict d;
        d["fwhm_thz"] = bw.fwhm_thz;
        d["lambda_span_nm"] = bw.lambda_span_nm;
        d["correlation_time_fs"] = spdc::correlation_time_fs(bw.fwhm_thz);
        return d;
      },
      py::arg("film"), py::arg("pump"), py::arg("collection_full_width") = 0.2);
  m.def("correlation_time_fs", &spdc::correlation_time_fs, py::arg("bandwidth_thz"));
  m.def("detection_angle_from_na", &spdc::detection_angle_from_na,
        py::arg("model"), py::arg("na"), py::arg("lambda_nm"));

  m.def(
      "pair_state_from_pump",
      [](double theta) {
        const auto s = spdc::pair_state_from_pump(theta);
        return std::vector<Complex>(s.amplitudes.begin(), s.amplitudes.end());
      },
      py::arg("theta"));
  m.def(
      "bell_state",
      [](const std::string& name) {
        const auto s = spdc::bell_state(name);
        return std::vector<Complex>(s.amplitudes.begin(), s.amplitudes.end());
      },
      py::arg("name"));
  m.def(
      "state_fidelity",
      [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
        return spdc::state_fidelity(state_from_list(a), state_from_list(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "shg_intensity",
      [](double theta, const std::string& analyzer, double d) {
        if (analyzer == "parallel")
          return spdc::shg_intensity(theta, spdc::Analyzer::Parallel, d);
        if (analyzer == "perpendicular")
          return spdc::shg_intensity(theta, spdc::Analyzer::Perpendicular, d);
        throw std::invalid_argument("analyzer must be parallel or perpendicular");
      },
      py::arg("theta"), py::arg("analyzer") = "parallel", py::arg("d") = 1.0);

  py::class_<spdc::DetectorModel>(m, "DetectorModel")
      .def(py::init([](double efficiency, double dark_hz, double jitter_s) {
             return spdc::DetectorModel{efficiency, dark_hz, jitter_s};
           }),
           py::arg("efficiency") = 1.0, py::arg("dark_hz") = 0.0,
           py::arg("jitter_s") = 0.0);
  py::class_<spdc::SourceModel>(m, "SourceModel")
      .def(py::init([](double pair_rate_per_mw, double bg1, double bg2) {
             return spdc::SourceModel{pair_rate_per_mw, bg1, bg2};
           }),
           py::arg("pair_rate_per_mw") = 0.0, py::arg("background_1") = 0.0,
           py::arg("background_2") = 0.0);

  m.def("simulate_time_tags", &spdc::simulate_time_tags, py::arg("source"),
        py::arg("det1"), py::arg("det2"), py::arg("power_mw"),
        py::arg("duration_s"), py::arg("seed"));
  m.def(
      "coincidence_histogram",
      [](const spdc::TimeTagStream& s1, const spdc::TimeTagStream& s2,
         double bin_width, double tau_max) {
        const auto h = spdc::coincidence_histogram(s1, s2, bin_width, tau_max);
        py::dict d;
        d["tau_axis"] = h.tau_axis;
        d["counts"] = h.counts;
        d["bin_width"] = h.bin_width;
        d["duration"] = h.duration;
        return d;
      },
      py::arg("s1"), py::arg("s2"), py::arg("bin_width"), py::arg("tau_max"));
  m.def(
      "g2_zero",
      [](const spdc::TimeTagStream& s1, const spdc::TimeTagStream& s2,
         double bin_width, double tau_max, double exclusion) {
        const auto h = spdc::coincidence_histogram(s1, s2, bin_width, tau_max);
        return spdc::g2_from_histogram(h, exclusion).g2_zero;
      },
      py::arg("s1"), py::arg("s2"), py::arg("bin_width"), py::arg("tau_max"),
      py::arg("exclusion"));
  m.def("analytic_g2_zero", &spdc::analytic_g2_zero, py::arg("coincidence_rate"),
        py::arg("singles_1"), py::arg("singles_2"), py::arg("bin_width"));
  m.def("loss_corrected_rate", &spdc::loss_corrected_rate, py::arg("raw_rate"),
        py::arg("chain"));

  m.def("standard_16_settings", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& s : spdc::standard_16_settings()) {
      out.emplace_back(spdc::basis_name(s.first), spdc::basis_name(s.second));
    }
    return out;
  });
  m.def(
      "projector",
      [](const std::string& a, const std::string& b) {
        return rho_to_list(
            spdc::projector(spdc::parse_basis(a), spdc::parse_basis(b)));
      },
      py::arg("basis_1"), py::arg("basis_2"));
  m.def(
      "simulate_counts",
      [](const RhoList& rho, double mean_total, std::uint64_t seed) {
        const auto records = spdc::simulate_counts(
            rho_from_list(rho), spdc::standard_16_settings(), mean_total, seed);
        std::vector<std::tuple<std::string, std::string, long long>> out;
        for (const auto& r : records) {
          out.emplace_back(spdc::basis_name(r.setting.first),
                           spdc::basis_name(r.setting.second), r.counts);
        }
        return out;
      },
      py::arg("rho"), py::arg("mean_total"), py::arg("seed"));
  m.def(
      "mle_reconstruct",
      [](const std::vector<std::tuple<std::string, std::string, long long>>& rows,
         std::optional<std::vector<Complex>> target) {
        std::optional<spdc::TwoPhotonState> t;
        if (target) t = state_from_list(*target);
        return result_to_dict(spdc::mle_reconstruct(records_from_list(rows), t));
      },
      py::arg("records"), py::arg("target") = std::nullopt);
  m.def(
      "fidelity",
      [](const RhoList& rho, const std::vector<Complex>& target) {
        return spdc::fidelity(rho_from_list(rho), state_from_list(target));
      },
      py::arg("rho"), py::arg("target"));
  m.def(
      "concurrence",
      [](const RhoList& rho) { return spdc::concurrence(rho_from_list(rho)); },
      py::arg("rho"));
  m.def(
      "pump_angle_experiment",
      [](double theta, double werner_p, double mean_total, std::uint64_t seed) {
        return result_to_dict(
            spdc::pump_angle_experiment(theta, werner_p, mean_total, seed));
      },
      py::arg("theta"), py::arg("werner_p") = 1.0, py::arg("mean_total") = 1e5,
      py::arg("seed") = 1);

  m.attr("__version__") = "0.1.0";
}
