#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "cqad/acceptance.hpp"
#include "cqad/analytic.hpp"
#include "cqad/engine.hpp"
#include "cqad/error.hpp"
#include "cqad/fitting.hpp"
#include "cqad/model.hpp"
#include "cqad/reference_device.hpp"
#include "cqad/reset.hpp"
#include "cqad/tof.hpp"

namespace py = pybind11;
using namespace cqad;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vec(const Array& a) {
  const auto r = a.unchecked<1>();
  std::vector<double> v(static_cast<std::size_t>(r.shape(0)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i) v[static_cast<std::size_t>(i)] = r(i);
  return v;
}

Array to_array(const std::vector<double>& v) {
  Array a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

TimeSeries series(const Array& t, const Array& y) {
  TimeSeries ts;
  ts.times = to_vec(t);
  ts.values = to_vec(y);
  return ts;
}

py::dict fit_dict(const FitResult& r) {
  py::dict params, errors;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    params[py::str(r.param_names[i])] = r.values[i];
    errors[py::str(r.param_names[i])] = r.std_errors[i];
  }
  py::dict d;
  d["params"] = params;
  d["std_errors"] = errors;
  d["residual_rms"] = r.residual_rms;
  d["iterations"] = r.iterations;
  d["converged"] = r.converged;
  d["notes"] = r.notes;
  return d;
}

template <class F>
Array map_times(const Array& t, F f) {
  std::vector<double> out;
  for (double x : to_vec(t)) out.push_back(f(x));
  return to_array(out);
}

}  // namespace

PYBIND11_MODULE(_cqad, m) {
  m.doc() = "Transmon + multimode SAW resonator simulator and fitting tools";

  static py::exception<InvalidArgument> invalid(m, "InvalidArgument", PyExc_ValueError);
  static py::exception<NumericalError> numerical(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const InvalidArgument& e) {
      py::set_error(invalid, e.what());
    } catch (const NumericalError& e) {
      py::set_error(numerical, e.what());
    }
  });

  // --- model ---------------------------------------------------------------
  py::class_<QubitParams>(m, "QubitParams")
      .def(py::init<>())
      .def(py::init([](double f01, double ec, double gamma) { return QubitParams{f01, ec, gamma}; }),
           py::arg("f01"), py::arg("ec"), py::arg("gamma") = 0.0)
      .def_readwrite("f01", &QubitParams::f01)
      .def_readwrite("ec", &QubitParams::ec)
      .def_readwrite("gamma", &QubitParams::gamma);

  py::class_<ModeParams>(m, "ModeParams")
      .def(py::init<>())
      .def(py::init([](int index, double f, double kappa, double g) { return ModeParams{index, f, kappa, g}; }),
           py::arg("index"), py::arg("f"), py::arg("kappa"), py::arg("g"))
      .def_readwrite("index", &ModeParams::index)
      .def_readwrite("f", &ModeParams::f)
      .def_readwrite("kappa", &ModeParams::kappa)
      .def_readwrite("g", &ModeParams::g);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init<>())
      .def(py::init([](QubitParams q, std::vector<ModeParams> modes) { return SystemParams{q, std::move(modes)}; }),
           py::arg("qubit"), py::arg("modes"))
      .def_readwrite("qubit", &SystemParams::qubit)
      .def_readwrite("modes", &SystemParams::modes)
      .def("mode", &SystemParams::mode, py::arg("index"), py::return_value_policy::copy)
      .def("to_json", [](const SystemParams& p) { return serialize(p); })
      .def_static("from_json", &parse_system_params, py::arg("text"));

  m.def("validate", &validate, py::arg("params"));
  m.def(
      "reference_system",
      [](const std::string& couplings, double f01, double gamma) {
        if (couplings == "max") return reference::seven_mode_system(reference::kCouplingMaxMHz, f01, gamma);
        if (couplings == "weak") return reference::seven_mode_system(reference::kCouplingWeakMHz, f01, gamma);
        throw InvalidArgument("reference_system: couplings must be 'max' or 'weak'");
      },
      py::arg("couplings") = "max", py::arg("f01") = reference::kIdleF01MHz, py::arg("gamma") = 0.0,
      "Seven-mode reference device at maximum ('max') or weak ('weak') coupling.");

  // --- analytic ------------------------------------------------------------
  m.def("chi_dispersive", &chi_dispersive, py::arg("g"), py::arg("delta"), py::arg("ec"),
        py::arg("pole_epsilon") = kDefaultPoleEpsilon);
  m.def("stark_shift", &stark_shift, py::arg("chi"), py::arg("nbar"));
  m.def("purcell_idle", &purcell_idle, py::arg("params"), py::arg("f_idle"), py::arg("gamma0"));
  m.def("gamma_prime", &gamma_prime, py::arg("params"), py::arg("resonant_index"));
  m.def(
      "pe_exact",
      [](const Array& t, double g, double gp, double kappa) {
        return map_times(t, [&](double x) { return pe_exact(x, g, gp, kappa); });
      },
      py::arg("t"), py::arg("g"), py::arg("gamma_p"), py::arg("kappa"));
  m.def(
      "pe_paper",
      [](const Array& t, double g, double gp, double kappa) {
        return map_times(t, [&](double x) { return pe_paper(x, g, gp, kappa); });
      },
      py::arg("t"), py::arg("g"), py::arg("gamma_p"), py::arg("kappa"));
  m.def("coupling_profile", &coupling_profile, py::arg("m"), py::arg("g0"), py::arg("phi"));
  m.def(
      "classify_regime",
      [](double g, double gp, double kappa) {
        const RegimeLabel r = classify_regime(g, gp, kappa);
        return std::make_pair(std::string(to_string(r.regime)), r.discriminant);
      },
      py::arg("g"), py::arg("gamma_p"), py::arg("kappa"));
  m.def("exceptional_point_coupling", &exceptional_point_coupling, py::arg("gamma_p"), py::arg("kappa"));

  // --- engine --------------------------------------------------------------
  m.def(
      "simulate_resonant_pe",
      [](const SystemParams& p, int mode, const Array& times, double rel_tol, double abs_tol) {
        EvolveOptions o;
        o.rel_tol = rel_tol;
        o.abs_tol = abs_tol;
        o.store_states = false;
        const auto t = to_vec(times);
        TimeSeries pe;
        EvolveStats stats;
        {
          py::gil_scoped_release release;
          pe = simulate_resonant_pe(p, resonant_spec(p, mode), mode, t, o, &stats);
        }
        py::dict s;
        s["trace_drift"] = stats.hygiene.trace_drift;
        s["hermiticity_residual"] = stats.hygiene.hermiticity_residual;
        s["min_eigenvalue"] = stats.hygiene.min_eigenvalue;
        s["accepted_steps"] = stats.accepted_steps;
        s["integrated_dim"] = stats.integrated_dim;
        return std::make_pair(to_array(pe.values), s);
      },
      py::arg("params"), py::arg("mode"), py::arg("times"), py::arg("rel_tol") = 1e-8, py::arg("abs_tol") = 1e-10,
      "Master-equation P_e(t) with the qubit resonant with `mode`; returns (pe, stats).");

  // --- fitting -------------------------------------------------------------
  m.def(
      "fit_exponential", [](const Array& t, const Array& y) { return fit_dict(fit_exponential(series(t, y))); },
      py::arg("t"), py::arg("y"));
  m.def(
      "fit_resonant",
      [](const Array& t, const Array& y, double gp, const std::string& model) {
        if (model != "exact" && model != "paper") throw InvalidArgument("fit_resonant: model must be exact or paper");
        return fit_dict(fit_resonant(series(t, y), gp, model == "exact" ? ResonantModel::exact : ResonantModel::paper));
      },
      py::arg("t"), py::arg("y"), py::arg("gamma_p"), py::arg("model") = "exact");
  m.def(
      "fit_coupling_profile",
      [](const std::vector<std::pair<int, double>>& pts) { return fit_dict(fit_coupling_profile(pts)); },
      py::arg("couplings"));
  m.def(
      "fit_purcell",
      [](const std::vector<std::pair<double, double>>& pts, const std::vector<double>& profile,
         const SystemParams& p) { return fit_dict(fit_purcell(pts, profile, p)); },
      py::arg("points"), py::arg("profile"), py::arg("params"));

  // --- tof -----------------------------------------------------------------
  m.def("saw_velocity", &saw_velocity, py::arg("p_nm"), py::arg("f_center_mhz"));
  py::class_<TofGeometry>(m, "TofGeometry")
      .def_readonly("v_e", &TofGeometry::v_e)
      .def_readonly("d0", &TofGeometry::d0)
      .def_readonly("L_p", &TofGeometry::L_p)
      .def_readonly("r_s", &TofGeometry::r_s)
      .def_readonly("L_c", &TofGeometry::L_c);
  m.def(
      "geometry_from_timing",
      [](double p, double f, double d1, double dt1, double dt2) {
        return geometry_from_timing(TofInput{p, f, d1, dt1, dt2});
      },
      py::arg("p_nm"), py::arg("f_center_mhz"), py::arg("d1_um"), py::arg("dt1_ns"), py::arg("dt2_ns"));
  py::class_<EchoModel>(m, "EchoModel")
      .def(py::init<>())
      .def_readwrite("L_c", &EchoModel::L_c)
      .def_readwrite("x_in", &EchoModel::x_in)
      .def_readwrite("x_out", &EchoModel::x_out)
      .def_readwrite("mirror_reflectivity", &EchoModel::mirror_reflectivity)
      .def_readwrite("loss_per_us", &EchoModel::loss_per_us)
      .def_readwrite("v_e", &EchoModel::v_e)
      .def_readwrite("sample_dt", &EchoModel::sample_dt)
      .def("round_trip_ns", &EchoModel::round_trip_ns);
  m.def("echo_model_for", &echo_model_for, py::arg("geometry"), py::arg("x_in") = 1.0,
        py::arg("mirror_reflectivity") = 0.98, py::arg("loss_per_us") = 0.5, py::arg("sample_dt") = 1.0);
  m.def(
      "simulate_echo",
      [](const EchoModel& model, double len, const std::string& env, double total) {
        if (env != "gaussian" && env != "rectangular") throw InvalidArgument("envelope must be gaussian or rectangular");
        const TimeSeries ts =
            simulate_echo(model, len, env == "gaussian" ? Envelope::gaussian : Envelope::rectangular, total);
        return std::make_pair(to_array(ts.times), to_array(ts.values));
      },
      py::arg("model"), py::arg("pulse_len_ns"), py::arg("envelope") = "gaussian", py::arg("total_time_ns") = 300.0,
      "Returns (t_ns, amplitude).");
  m.def(
      "echo_period", [](const Array& t, const Array& y) { return echo_period(series(t, y)); }, py::arg("t"),
      py::arg("amplitude"));
  m.def(
      "detect_subecho",
      [](const Array& t, const Array& y, const EchoModel& model, double len) {
        const SubechoFeature f = detect_subecho(series(t, y), model, len);
        return std::make_pair(f.present, f.dip_fraction);
      },
      py::arg("t"), py::arg("amplitude"), py::arg("model"), py::arg("pulse_len_ns"));

  // --- reset ---------------------------------------------------------------
  m.def(
      "reset_time", [](const Array& t, const Array& pg, double th) { return reset_time(series(t, pg), th); },
      py::arg("t"), py::arg("pg"), py::arg("threshold"));
  m.def(
      "sweep_reset",
      [](double gamma, double kappa_r, std::vector<double> ratios, std::vector<double> thresholds, double t_max,
         double dt, const std::string& dynamics) {
        ResetConfig cfg;
        cfg.gamma = gamma;
        cfg.kappa_r = kappa_r;
        if (!ratios.empty()) cfg.ratios = std::move(ratios);
        cfg.thresholds = std::move(thresholds);
        cfg.t_max = t_max;
        cfg.dt = dt;
        if (dynamics != "analytic" && dynamics != "engine") throw InvalidArgument("dynamics must be analytic or engine");
        cfg.dynamics = dynamics == "engine" ? ResetDynamics::engine : ResetDynamics::analytic;
        std::vector<ResetSweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = sweep_reset(cfg);
        }
        std::vector<std::pair<double, std::vector<std::optional<double>>>> out;
        for (auto& r : rows) out.emplace_back(r.ratio, std::move(r.reset_times));
        return out;
      },
      py::arg("gamma") = 0.2, py::arg("kappa_r") = 2.5, py::arg("ratios") = std::vector<double>{},
      py::arg("thresholds") = std::vector<double>{0.99, 0.999}, py::arg("t_max") = 20.0, py::arg("dt") = 1e-3,
      py::arg("dynamics") = "analytic",
      "List of (ratio, [reset time per threshold or None]); empty ratios selects the default grid.");
  m.def("purcell_impact", &purcell_impact, py::arg("g_r"), py::arg("kappa_r"), py::arg("delta_r"), py::arg("gamma"));
  m.def(
      "impact_crossings",
      [](const std::vector<double>& levels, double gamma, double kappa_r, double delta_r) {
        ResetConfig cfg;
        cfg.gamma = gamma;
        cfg.kappa_r = kappa_r;
        cfg.delta_r = delta_r;
        return impact_crossings(cfg, levels);
      },
      py::arg("levels"), py::arg("gamma") = 0.2, py::arg("kappa_r") = 2.5, py::arg("delta_r") = 300.0);

  // --- acceptance ----------------------------------------------------------
  m.def(
      "run_acceptance",
      [](std::vector<int> only, std::uint64_t seed) {
        acceptance::Options o;
        o.only = std::move(only);
        o.seed = seed;
        std::vector<acceptance::CriterionResult> res;
        {
          py::gil_scoped_release release;
          res = acceptance::run_all(o);
        }
        py::list out;
        for (const auto& r : res) {
          py::dict d;
          d["id"] = r.id;
          d["title"] = r.title;
          d["passed"] = r.passed;
          d["detail"] = r.detail;
          d["seconds"] = r.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("only") = std::vector<int>{}, py::arg("seed") = acceptance::Options{}.seed);

  m.attr("__version__") = CQAD_VERSION;
}
