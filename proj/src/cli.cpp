#include "jchsim/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <Eigen/Core>
#include <boost/version.hpp>

#include "CLI11.hpp"
#include "json.hpp"

#include "jchsim/analytic_dimer.hpp"
#include "jchsim/config.hpp"
#include "jchsim/driver.hpp"
#include "jchsim/dynamics.hpp"
#include "jchsim/initialization.hpp"
#include "jchsim/observables.hpp"

namespace jch {

namespace {

using nlohmann::json;

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flag name -> configuration key; every flag overrides exactly one key.
const std::vector<std::pair<std::string, std::string>>& flag_keys() {
  static const std::vector<std::pair<std::string, std::string>> table{
      {"lattice", "lattice.topology"},
      {"sites", "lattice.sites"},
      {"omega", "physics.omega"},
      {"g", "physics.g"},
      {"delta-over-g", "physics.delta_over_g"},
      {"j", "physics.hopping"},
      {"t-end", "quench.t_end"},
      {"samples", "quench.samples"},
      {"representation", "quench.representation"},
      {"n-max", "quench.n_max"},
      {"kappa", "dissipation.kappa"},
      {"gamma", "dissipation.gamma"},
      {"gamma-phi", "dissipation.gamma_phi"},
      {"rel-tol", "dissipation.rel_tol"},
      {"init", "dissipation.initialization.enabled"},
      {"g-ancilla", "dissipation.initialization.g_ancilla"},
      {"min", "sweep.min"},
      {"max", "sweep.max"},
      {"points", "sweep.points"},
      {"spacing", "sweep.spacing"},
      {"threads", "sweep.threads"},
      {"prominence", "sweep.prominence"},
      {"window-min", "sweep.window_min"},
      {"window-max", "sweep.window_max"},
      {"csv", "output.csv"},
      {"json", "output.json"},
      {"log", "output.log"},
  };
  return table;
}

struct ConfigFlags {
  std::string config_path;
  std::string mode;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> values;  // flag -> text, filled by CLI11
};

void add_config_flags(CLI::App* cmd, ConfigFlags& f, bool with_mode) {
  cmd->add_option("--config", f.config_path, "JSON configuration file");
  if (with_mode) cmd->add_option("--mode", f.mode, "closed or open")->check(CLI::IsMember({"closed", "open"}));
  cmd->add_option("--set", f.sets, "Override any key: section.key=value (repeatable)");
  f.values.reserve(flag_keys().size());
  for (const auto& [flag, key] : flag_keys()) {
    f.values.emplace_back(flag, std::string());
    cmd->add_option("--" + flag, f.values.back().second, "Overrides " + key);
  }
}

// Mode precedence: subcommand or --mode, then the file's "mode", then closed.
RunConfig build_config(const ConfigFlags& f, std::optional<SweepMode> forced, CLI::App* cmd) {
  SweepMode mode = forced.value_or(SweepMode::Closed);
  if (!forced && !f.config_path.empty()) {
    RunConfig probe;
    apply_config_file(probe, f.config_path);
    mode = probe.mode;
  }
  RunConfig cfg = default_config(mode);
  if (!f.config_path.empty()) apply_config_file(cfg, f.config_path);
  for (const std::string& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError(s, "expected section.key=value");
    apply_override(cfg, s.substr(0, eq), s.substr(eq + 1));
  }
  for (std::size_t k = 0; k < flag_keys().size(); ++k) {
    const auto& [flag, key] = flag_keys()[k];
    if (cmd->count("--" + flag) > 0) apply_override(cfg, key, f.values[k].second);
  }
  cfg.mode = mode;
  validate(cfg);
  return cfg;
}

std::optional<SweepMode> mode_of(const ConfigFlags& f) {
  if (f.mode == "open") return SweepMode::Open;
  if (f.mode == "closed") return SweepMode::Closed;
  return std::nullopt;
}

// Opens `path` for writing, or returns the fallback stream when empty.
struct Sink {
  std::unique_ptr<std::ofstream> file;
  std::ostream* stream = nullptr;

  Sink(const std::string& path, std::ostream* fallback) {
    if (path.empty()) {
      stream = fallback;
      return;
    }
    file = std::make_unique<std::ofstream>(path);
    if (!*file) throw OutputError("cannot write " + path);
    stream = file.get();
  }
  explicit operator bool() const { return stream != nullptr; }
  std::ostream& operator*() const { return *stream; }
};

json versions() {
  char eigen[32];
  std::snprintf(eigen, sizeof eigen, "%d.%d.%d", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
  return {{"jchsim", JCHSIM_VERSION}, {"eigen", eigen}, {"boost", BOOST_LIB_VERSION}};
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

int dimer_analytic(double ratio, double g, double hopping, double omega, const std::string& json_path,
                   std::ostream& out) {
  const JCParams p = JCParams::from_detuning_ratio(omega, g, ratio);
  const EffectiveDimerHamiltonian h = dimer_effective(p, hopping);
  const double var = variance_time_avg(h, hopping);
  const double ent = entropy_time_avg(h, hopping);
  const DimerSpectralData s = spectral_data(h);
  Sink js(json_path, nullptr);
  out << "delta_over_g " << ratio << "\n"
      << "var_time_avg " << number(var) << "\n"
      << "entropy_time_avg " << number(ent) << "\n";
  if (js) {
    json j{{"delta_over_g", ratio}, {"omega", omega}, {"g", g}, {"hopping", hopping},
           {"var_time_avg", var}, {"entropy_time_avg", ent}, {"a", h.a}, {"b", h.b}, {"c", h.c},
           {"omega0", s.omega0}, {"versions", versions()}};
    *js << j.dump(2) << "\n";
  }
  return 0;
}

template <class Traj>
void write_trajectory(std::ostream& out, const Traj& traj, const JCParams& p) {
  const std::size_t L = traj.basis->num_sites();
  const auto pairs = correlation_pairs(L);
  std::vector<TimeSeries> cols;
  std::vector<std::string> names;
  for (std::size_t s = 0; s < L; ++s) {
    cols.push_back(polariton_number_series(traj, s));
    names.push_back(std::string("n_") + static_cast<char>('i' + s));
  }
  cols.push_back(variance_series(traj, 0));
  names.emplace_back("var_i");
  for (auto [a, b] : pairs) {
    cols.push_back(correlation_series(traj, a, b));
    names.push_back("c_" + pair_name(a, b));
  }
  cols.push_back(linear_entropy_series(traj, 0));
  names.emplace_back("entropy_i");
  const auto labels = population_label_names(L);
  auto pops = labeled_populations(traj, p, labels);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    cols.push_back(std::move(pops[k]));
    names.push_back("p_" + labels[k]);
  }
  out << "t";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  char buf[40];
  for (std::size_t r = 0; r < traj.times.size(); ++r) {
    std::snprintf(buf, sizeof buf, "%.12g", traj.times[r]);
    out << buf;
    for (const auto& c : cols) {
      std::snprintf(buf, sizeof buf, "%.12g", c.values[r]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

template <class Traj>
json trajectory_summary(const Traj& traj, double tau) {
  json j{{"tau", tau},
         {"var_numeric", variance_time_avg_numeric(traj, 0, tau)},
         {"entropy_numeric", linear_entropy_time_avg(traj, 0, tau)}};
  for (auto [a, b] : correlation_pairs(traj.basis->num_sites())) {
    j["c_" + pair_name(a, b)] = two_point_correlation(traj, a, b, tau);
  }
  return j;
}

int run_quench(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Sink csv(cfg.csv, &out);
  Sink js(cfg.json, &err);
  Sink log(cfg.log, nullptr);
  const double ratio = cfg.delta_over_g;
  const JCParams p = cfg.params(ratio);
  json summary{{"parameters", json::parse(to_json_text(cfg))}, {"versions", versions()}};
  std::vector<std::string> warnings;
  if (cfg.hopping > 0.0) {
    const EffectiveDimerHamiltonian h = dimer_effective(p, cfg.hopping);
    summary["var_dimer_analytic"] = variance_time_avg(h, cfg.hopping);
    summary["entropy_dimer_analytic"] = entropy_time_avg(h, cfg.hopping);
  }
  if (cfg.mode == SweepMode::Closed) {
    const ClosedQuenchResult res = quench(cfg.quench_config(ratio));
    write_trajectory(*csv, res.trajectory, p);
    summary["averages"] = trajectory_summary(res.trajectory, res.tau);
    summary["rwa_ok"] = res.rwa.passes();
    warnings = res.warnings;
  } else {
    DenseMatrix site_state;
    if (cfg.initialize) {
      const InitializationResult init = initialize_with_ancilla(cfg.initialization_config(ratio));
      site_state = init.site_state;
      summary["init_fidelity"] = init.fidelity;
      warnings = init.warnings;
    }
    const OpenQuenchResult res = quench_open({cfg.quench_config(ratio), cfg.rates, cfg.integrator}, site_state);
    write_trajectory(*csv, res.trajectory, p);
    summary["averages"] = trajectory_summary(res.trajectory, res.tau);
    summary["discarded_weight"] = res.discarded_weight;
    warnings.insert(warnings.end(), res.warnings.begin(), res.warnings.end());
  }
  summary["warnings"] = warnings;
  *js << summary.dump(2) << "\n";
  if (log) {
    for (const auto& w : warnings) *log << "warning: " << w << "\n";
    *log << "quench finished at delta_over_g " << ratio << "\n";
  }
  return 0;
}

DetectionOptions detection_options(const RunConfig& cfg) {
  DetectionOptions o;
  o.prominence_fraction = cfg.prominence;
  o.window_min = cfg.window_min;
  o.window_max = cfg.window_max;
  return o;
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  Sink csv(cfg.csv, &out);
  Sink js(cfg.json, &err);
  Sink log(cfg.log, nullptr);
  const SweepResult r = sweep(cfg);
  write_csv(*csv, r);

  std::size_t failed = 0;
  for (const auto& rec : r.records) failed += rec.failed ? 1 : 0;
  json summary{{"parameters", json::parse(to_json_text(cfg))},
               {"versions", versions()},
               {"points", r.records.size()},
               {"failed_points", failed}};
  const std::size_t in_window = static_cast<std::size_t>(std::count_if(
      r.records.begin(), r.records.end(),
      [&](const SweepRecord& rec) { return rec.delta_over_g > cfg.window_min && rec.delta_over_g < cfg.window_max; }));
  if (in_window >= 3) summary["report"] = json::parse(to_json_text(detect_resonances(r, detection_options(cfg))));
  *js << summary.dump(2) << "\n";
  if (log) {
    for (const auto& rec : r.records) {
      *log << "delta_over_g " << rec.delta_over_g << (rec.failed ? " failed: " + rec.error : std::string(" ok")) << "\n";
      for (const auto& w : rec.warnings) *log << "  warning: " << w << "\n";
    }
  }
  return failed == r.records.size() && !r.records.empty() ? 1 : 0;
}

int run_init(const RunConfig& cfg, std::ostream& out) {
  const InitializationResult res = initialize_with_ancilla(cfg.initialization_config(cfg.delta_over_g));
  json j{{"delta_over_g", cfg.delta_over_g},
         {"g_ancilla", cfg.g_ancilla},
         {"fidelity", res.fidelity},
         {"infidelity", 1.0 - res.fidelity},
         {"leakage_upper", res.leakage},
         {"ancilla_excited", res.excited_ancilla},
         {"pulse_fidelity", res.pulse_fidelity},
         {"pulse_duration", res.pulse_duration},
         {"swap_time", res.swap_time},
         {"warnings", res.warnings}};
  Sink js(cfg.json, &out);
  *js << j.dump(2) << "\n";
  return 0;
}

int run_detect(const std::string& input, const DetectionOptions& opt, const std::string& output, std::ostream& out) {
  std::ifstream in(input);
  if (!in) throw OutputError("cannot read " + input);
  const CsvTable table = read_csv(in);
  Sink js(output, &out);
  *js << to_json_text(detect_resonances(table, opt)) << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Jaynes-Cummings-Hubbard quench simulator", "jchsim"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(JCHSIM_VERSION));

  double d_ratio = 1000.0, d_g = 1e-2, d_j = 1e-4, d_omega = 1.0;
  std::string d_json;
  CLI::App* dimer = app.add_subcommand("dimer-analytic", "Closed-form dimer variance and entropy");
  dimer->add_option("--delta-over-g", d_ratio, "Detuning in units of g");
  dimer->add_option("--g", d_g, "Light-matter coupling");
  dimer->add_option("--j", d_j, "Hopping");
  dimer->add_option("--omega", d_omega, "Resonator frequency");
  dimer->add_option("--json", d_json, "Write a JSON summary here");

  ConfigFlags qf, sf, of, inf;
  CLI::App* quench_cmd = app.add_subcommand("quench", "Single quench; writes the trajectory CSV");
  add_config_flags(quench_cmd, qf, true);
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Detuning sweep");
  add_config_flags(sweep_cmd, sf, true);
  CLI::App* open_cmd = app.add_subcommand("open-sweep", "Open-system detuning sweep");
  add_config_flags(open_cmd, of, false);
  CLI::App* init_cmd = app.add_subcommand("init-protocol", "Ancilla state preparation for one site");
  add_config_flags(init_cmd, inf, false);

  std::string det_input, det_output;
  DetectionOptions det_opt;
  CLI::App* detect_cmd = app.add_subcommand("detect", "Resonances of a sweep CSV");
  detect_cmd->add_option("--input", det_input, "Sweep CSV")->required();
  detect_cmd->add_option("--json", det_output, "Write the report here instead of stdout");
  detect_cmd->add_option("--prominence", det_opt.prominence_fraction, "Minimum prominence as a fraction of the curve range");
  detect_cmd->add_option("--window-min", det_opt.window_min, "Lower edge of the detection window");
  detect_cmd->add_option("--window-max", det_opt.window_max, "Upper edge of the detection window");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (dimer->parsed()) return dimer_analytic(d_ratio, d_g, d_j, d_omega, d_json, out);
    if (quench_cmd->parsed()) {
      return run_quench(build_config(qf, mode_of(qf), quench_cmd), out, err);
    }
    if (sweep_cmd->parsed()) {
      return run_sweep(build_config(sf, mode_of(sf), sweep_cmd), out, err);
    }
    if (open_cmd->parsed()) return run_sweep(build_config(of, SweepMode::Open, open_cmd), out, err);
    if (init_cmd->parsed()) return run_init(build_config(inf, SweepMode::Open, init_cmd), out);
    if (detect_cmd->parsed()) return run_detect(det_input, det_opt, det_output, out);
  } catch (const ConfigError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const OutputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace jch
