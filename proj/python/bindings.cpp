#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "jchsim/analytic_dimer.hpp"
#include "jchsim/cli.hpp"
#include "jchsim/config.hpp"
#include "jchsim/driver.hpp"
#include "jchsim/dynamics.hpp"
#include "jchsim/effective.hpp"
#include "jchsim/initialization.hpp"
#include "jchsim/observables.hpp"
#include "jchsim/polariton.hpp"

namespace py = pybind11;
using namespace jch;

namespace {

// Overrides are dotted keys with JSON-text or plain values.
RunConfig make_config(SweepMode mode, const py::dict& overrides) {
  RunConfig cfg = default_config(mode);
  for (const auto& [k, v] : overrides) {
    const std::string key = py::str(k);
    std::string text;
    if (py::isinstance<py::bool_>(v)) {
      text = v.cast<bool>() ? "true" : "false";
    } else if (py::isinstance<py::str>(v)) {
      text = v.cast<std::string>();
    } else {
      text = py::str(py::module_::import("json").attr("dumps")(v));
    }
    apply_override(cfg, key, text);
  }
  cfg.mode = mode;
  validate(cfg);
  return cfg;
}

SweepMode parse_mode(const std::string& m) {
  if (m == "closed") return SweepMode::Closed;
  if (m == "open") return SweepMode::Open;
  throw py::value_error("mode must be 'closed' or 'open'");
}

template <class Traj>
py::dict trajectory_dict(const Traj& traj, double tau) {
  const std::size_t L = traj.basis->num_sites();
  py::dict out;
  out["times"] = traj.times;
  out["tau"] = tau;
  py::list n, var, ent;
  for (std::size_t s = 0; s < L; ++s) {
    n.append(polariton_number_series(traj, s).values);
    var.append(variance_series(traj, s).values);
    ent.append(linear_entropy_series(traj, s).values);
  }
  out["number"] = n;
  out["variance"] = var;
  out["entropy"] = ent;
  py::dict corr;
  for (const auto& [a, b] : correlation_pairs(L)) corr[py::str(pair_name(a, b))] = correlation_series(traj, a, b).values;
  out["correlation"] = corr;
  return out;
}

py::dict record_dict(const SweepRecord& r, const std::vector<std::string>& names) {
  py::dict d;
  d["delta_over_g"] = r.delta_over_g;
  d["var_dimer_analytic"] = r.var_dimer_analytic;
  d["entropy_dimer_analytic"] = r.entropy_dimer_analytic;
  d["var_numeric"] = r.var_numeric;
  d["entropy_numeric"] = r.entropy_numeric;
  for (std::size_t k = 0; k < names.size() && k < r.ratios.size(); ++k) {
    d[py::str("c_" + names[k])] = r.correlations[k];
    d[py::str("ratio_" + names[k])] = r.ratios[k];
  }
  d["init_fidelity"] = r.init_fidelity;
  d["rwa_ok"] = r.rwa_ok;
  d["near_resonance"] = r.near_resonance;
  d["failed"] = r.failed;
  d["error"] = r.error;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Jaynes-Cummings-Hubbard quench simulator";
  m.attr("__version__") = JCHSIM_VERSION;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::enum_<Branch>(m, "Branch").value("Lower", Branch::Lower).value("Upper", Branch::Upper);

  py::class_<JCParams>(m, "JCParams")
      .def(py::init<double, double, double>(), py::arg("omega"), py::arg("delta"), py::arg("g"))
      .def_static("from_detuning_ratio", &JCParams::from_detuning_ratio, py::arg("omega"), py::arg("g"),
                  py::arg("delta_over_g"))
      .def_property_readonly("omega", &JCParams::omega)
      .def_property_readonly("omega0", &JCParams::omega0)
      .def_property_readonly("delta", &JCParams::delta)
      .def_property_readonly("g", &JCParams::g);

  py::class_<PolaritonCoeffs>(m, "PolaritonCoeffs")
      .def_readonly("rho_plus", &PolaritonCoeffs::rho_plus)
      .def_readonly("gamma_plus", &PolaritonCoeffs::gamma_plus)
      .def_readonly("rho_minus", &PolaritonCoeffs::rho_minus)
      .def_readonly("gamma_minus", &PolaritonCoeffs::gamma_minus);

  m.def("chi", &chi, py::arg("n"), py::arg("params"));
  m.def("polariton_energy", &polariton_energy, py::arg("n"), py::arg("branch"), py::arg("params"));
  m.def("mixing_angle", &mixing_angle, py::arg("n"), py::arg("params"));
  m.def("coefficients", &coefficients, py::arg("n"), py::arg("params"));
  m.def("hopping_element", &hopping_element, py::arg("n"), py::arg("alpha"), py::arg("alpha_prime"),
        py::arg("params"));

  m.def(
      "rwa_report",
      [](const JCParams& p, double hopping, int n_max) {
        const RwaReport r = rwa_report(p, hopping, n_max);
        py::dict d;
        d["passes"] = r.passes();
        d["flagged"] = r.flagged();
        d["lower_branch_gap"] = r.lower_branch_gap;
        d["near_resonance"] = r.near_resonance;
        return d;
      },
      py::arg("params"), py::arg("hopping"), py::arg("n_max") = 5);

  m.def("effective_dimension", &effective_dimension, py::arg("sites"), py::arg("excitations"));

  py::class_<EffectiveDimerHamiltonian>(m, "EffectiveDimer")
      .def_readonly("a", &EffectiveDimerHamiltonian::a)
      .def_readonly("b", &EffectiveDimerHamiltonian::b)
      .def_readonly("c", &EffectiveDimerHamiltonian::c)
      .def_readonly("detuning", &EffectiveDimerHamiltonian::detuning);
  m.def("dimer_effective", &dimer_effective, py::arg("params"), py::arg("hopping"));
  m.def("variance_time_avg", &variance_time_avg, py::arg("dimer"), py::arg("hopping"));
  m.def("entropy_time_avg", &entropy_time_avg, py::arg("dimer"), py::arg("hopping"));
  m.def(
      "dimer_amplitudes",
      [](double t, const EffectiveDimerHamiltonian& h) {
        const DimerAmplitudes c = amplitudes(t, h);
        return std::make_pair(c.c0, c.c2);
      },
      py::arg("t"), py::arg("dimer"));

  m.def("config_keys", &config_keys);
  m.def(
      "default_config",
      [](const std::string& mode) { return to_json_text(default_config(parse_mode(mode))); }, py::arg("mode") = "closed",
      "Default configuration as JSON text.");

  m.def(
      "quench",
      [](const py::dict& overrides, const std::string& mode) {
        const RunConfig cfg = make_config(parse_mode(mode), overrides);
        if (cfg.mode == SweepMode::Closed) {
          ClosedQuenchResult r;
          {
            py::gil_scoped_release release;
            r = quench(cfg.quench_config(cfg.delta_over_g));
          }
          py::dict d = trajectory_dict(r.trajectory, r.tau);
          d["warnings"] = r.warnings;
          d["rwa_ok"] = r.rwa.passes();
          return d;
        }
        OpenQuenchResult r;
        double fidelity = 1.0;
        {
          py::gil_scoped_release release;
          DenseMatrix site_state;
          if (cfg.initialize) {
            const InitializationResult init = initialize_with_ancilla(cfg.initialization_config(cfg.delta_over_g));
            site_state = init.site_state;
            fidelity = init.fidelity;
          }
          r = quench_open({cfg.quench_config(cfg.delta_over_g), cfg.rates, cfg.integrator}, site_state);
        }
        py::dict d = trajectory_dict(r.trajectory, r.tau);
        d["warnings"] = r.warnings;
        d["init_fidelity"] = fidelity;
        d["discarded_weight"] = r.discarded_weight;
        return d;
      },
      py::arg("overrides") = py::dict(), py::arg("mode") = "closed",
      "Single quench. `overrides` maps dotted configuration keys to values.");

  m.def(
      "sweep",
      [](const py::dict& overrides, const std::string& mode) {
        const RunConfig cfg = make_config(parse_mode(mode), overrides);
        SweepResult r;
        {
          py::gil_scoped_release release;
          r = sweep(cfg);
        }
        std::ostringstream csv;
        write_csv(csv, r);
        py::list records;
        for (const auto& rec : r.records) records.append(record_dict(rec, r.pair_names));
        py::dict d;
        d["records"] = records;
        d["csv"] = csv.str();
        d["detection"] = py::module_::import("json").attr("loads")(to_json_text(detect_resonances(r)));
        return d;
      },
      py::arg("overrides") = py::dict(), py::arg("mode") = "closed");

  m.def(
      "detect",
      [](const std::string& csv_text, double prominence, double window_min, double window_max) {
        std::istringstream in(csv_text);
        DetectionOptions o;
        o.prominence_fraction = prominence;
        o.window_min = window_min;
        o.window_max = window_max;
        return py::module_::import("json").attr("loads")(to_json_text(detect_resonances(read_csv(in), o)));
      },
      py::arg("csv_text"), py::arg("prominence") = 0.1, py::arg("window_min") = 1.0, py::arg("window_max") = 10.0);

  m.def(
      "initialize",
      [](const py::dict& overrides) {
        const RunConfig cfg = make_config(SweepMode::Open, overrides);
        InitializationResult r;
        {
          py::gil_scoped_release release;
          r = initialize_with_ancilla(cfg.initialization_config(cfg.delta_over_g));
        }
        py::dict d;
        d["fidelity"] = r.fidelity;
        d["leakage"] = r.leakage;
        d["pulse_fidelity"] = r.pulse_fidelity;
        d["excited_ancilla"] = r.excited_ancilla;
        d["swap_time"] = r.swap_time;
        d["pulse_duration"] = r.pulse_duration;
        d["warnings"] = r.warnings;
        return d;
      },
      py::arg("overrides") = py::dict());

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs the command line with `args` (no program name); returns (code, stdout, stderr).");
}
