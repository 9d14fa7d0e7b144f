#include "jchsim/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"

namespace jch {

using nlohmann::json;

LatticeGraph RunConfig::lattice() const {
  if (topology == "dimer") return LatticeGraph::chain(2);
  if (topology == "trimer") return LatticeGraph::chain(3);
  if (topology == "tetramer") return LatticeGraph::chain(4);
  if (topology == "chain") return LatticeGraph::chain(sites);
  if (topology == "graph") return LatticeGraph(sites, edges);
  throw ConfigError("lattice.topology", "unknown topology '" + topology + "'");
}

JCParams RunConfig::params(double ratio) const { return JCParams::from_detuning_ratio(omega, g, ratio); }

QuenchConfig RunConfig::quench_config(double ratio) const {
  QuenchConfig q;
  q.lattice = lattice();
  q.params = params(ratio);
  q.hopping = hopping;
  q.t_end = t_end;
  q.n_time_samples = samples;
  q.auto_samples = auto_samples;
  q.representation = representation;
  q.n_max = n_max;
  return q;
}

InitializationConfig RunConfig::initialization_config(double ratio) const {
  InitializationConfig c;
  c.params = params(ratio);
  c.g_ancilla = g_ancilla;
  c.site_rates = rates;
  c.ancilla_rates = {rates.gamma, rates.gamma_phi, 0.0};
  c.pulse = pulse;
  c.n_max = n_max;
  c.fidelity_floor = fidelity_floor;
  return c;
}

std::vector<double> RunConfig::grid() const {
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = sweep_min;
    return out;
  }
  for (std::size_t k = 0; k < points; ++k) {
    const double f = static_cast<double>(k) / static_cast<double>(points - 1);
    out[k] = spacing == Spacing::Log
                 ? std::pow(10.0, std::log10(sweep_min) + f * (std::log10(sweep_max) - std::log10(sweep_min)))
                 : sweep_min + f * (sweep_max - sweep_min);
  }
  out.front() = sweep_min;
  out.back() = sweep_max;
  return out;
}

RunConfig default_config(SweepMode mode) {
  RunConfig c;
  c.mode = mode;
  if (mode == SweepMode::Open) {
    c.topology = "trimer";
    c.sites = 3;
    c.omega = 5000.0;
    c.g = 200.0;
    c.hopping = 2.0;
    c.n_max = 4;
    c.rates = {0.035, 0.045, 0.225};
    c.initialize = true;
    c.sweep_min = 1.0;
    c.sweep_max = 10.0;
    c.points = 121;
  }
  return c;
}

namespace {

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "expected a finite number");
  return x;
}

double positive(const std::string& key, const json& v) {
  const double x = as_number(key, v);
  if (!(x > 0.0)) throw ConfigError(key, "must be positive");
  return x;
}

double non_negative(const std::string& key, const json& v) {
  const double x = as_number(key, v);
  if (!(x >= 0.0)) throw ConfigError(key, "must be non-negative");
  return x;
}

std::size_t count(const std::string& key, const json& v) {
  if (!v.is_number_integer() && !(v.is_number() && std::floor(v.get<double>()) == v.get<double>())) {
    throw ConfigError(key, "expected an integer");
  }
  const double x = v.get<double>();
  if (x < 0.0) throw ConfigError(key, "must be non-negative");
  return static_cast<std::size_t>(x);
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) throw ConfigError(key, "expected true or false");
  return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) throw ConfigError(key, "expected a string");
  return v.get<std::string>();
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const json&)> set;
  std::function<json(const RunConfig&)> get;
};

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = [] {
    std::map<std::string, Field> t;
    auto num = [&t](const std::string& key, double RunConfig::*member, double (*check)(const std::string&, const json&)) {
      t[key] = {[member, check](RunConfig& c, const std::string& k, const json& v) { c.*member = check(k, v); },
                [member](const RunConfig& c) { return json(c.*member); }};
    };
    auto rate = [&t](const std::string& key, double LindbladRates::*member) {
      t[key] = {[member](RunConfig& c, const std::string& k, const json& v) { c.rates.*member = non_negative(k, v); },
                [member](const RunConfig& c) { return json(c.rates.*member); }};
    };
    auto pulse = [&t](const std::string& key, double PulseSpec::*member) {
      t[key] = {[member](RunConfig& c, const std::string& k, const json& v) { c.pulse.*member = positive(k, v); },
                [member](const RunConfig& c) { return json(c.pulse.*member); }};
    };
    auto str = [&t](const std::string& key, std::string RunConfig::*member) {
      t[key] = {[member](RunConfig& c, const std::string& k, const json& v) { c.*member = as_string(k, v); },
                [member](const RunConfig& c) { return json(c.*member); }};
    };

    t["mode"] = {[](RunConfig& c, const std::string& k, const json& v) {
                   const std::string s = as_string(k, v);
                   if (s != "closed" && s != "open") throw ConfigError(k, "expected closed or open");
                   c.mode = s == "open" ? SweepMode::Open : SweepMode::Closed;
                 },
                 [](const RunConfig& c) { return json(c.mode == SweepMode::Open ? "open" : "closed"); }};
    t["lattice.topology"] = {[](RunConfig& c, const std::string& k, const json& v) {
                               const std::string s = as_string(k, v);
                               if (s != "dimer" && s != "trimer" && s != "tetramer" && s != "chain" && s != "graph") {
                                 throw ConfigError(k, "unknown topology '" + s + "'");
                               }
                               c.topology = s;
                               if (s == "dimer") c.sites = 2;
                               if (s == "trimer") c.sites = 3;
                               if (s == "tetramer") c.sites = 4;
                             },
                             [](const RunConfig& c) { return json(c.topology); }};
    t["lattice.sites"] = {[](RunConfig& c, const std::string& k, const json& v) {
                            c.sites = count(k, v);
                            if (c.sites == 0) throw ConfigError(k, "must be positive");
                          },
                          [](const RunConfig& c) { return json(c.sites); }};
    t["lattice.edges"] = {[](RunConfig& c, const std::string& k, const json& v) {
                            if (!v.is_array()) throw ConfigError(k, "expected a list of [i, j] pairs");
                            c.edges.clear();
                            for (const json& e : v) {
                              if (!e.is_array() || e.size() != 2) throw ConfigError(k, "expected a list of [i, j] pairs");
                              c.edges.push_back({count(k, e[0]), count(k, e[1])});
                            }
                          },
                          [](const RunConfig& c) {
                            json a = json::array();
                            for (const Edge& e : c.edges) a.push_back({e.first, e.second});
                            return a;
                          }};

    num("physics.omega", &RunConfig::omega, positive);
    num("physics.g", &RunConfig::g, positive);
    num("physics.delta_over_g", &RunConfig::delta_over_g, as_number);
    num("physics.hopping", &RunConfig::hopping, non_negative);

    t["quench.t_end"] = {[](RunConfig& c, const std::string& k, const json& v) {
                           if (v.is_null()) c.t_end.reset();
                           else c.t_end = positive(k, v);
                         },
                         [](const RunConfig& c) { return c.t_end ? json(*c.t_end) : json(nullptr); }};
    t["quench.samples"] = {[](RunConfig& c, const std::string& k, const json& v) {
                             c.samples = count(k, v);
                             if (c.samples < 2) throw ConfigError(k, "need at least 2 samples");
                           },
                           [](const RunConfig& c) { return json(c.samples); }};
    t["quench.auto_samples"] = {[](RunConfig& c, const std::string& k, const json& v) { c.auto_samples = as_bool(k, v); },
                                [](const RunConfig& c) { return json(c.auto_samples); }};
    t["quench.representation"] = {[](RunConfig& c, const std::string& k, const json& v) {
                                    const std::string s = as_string(k, v);
                                    if (s == "full_fock") c.representation = Representation::FullFock;
                                    else if (s == "effective") c.representation = Representation::Effective;
                                    else throw ConfigError(k, "expected full_fock or effective");
                                  },
                                  [](const RunConfig& c) {
                                    return json(c.representation == Representation::FullFock ? "full_fock" : "effective");
                                  }};
    t["quench.n_max"] = {[](RunConfig& c, const std::string& k, const json& v) {
                           const std::size_t n = count(k, v);
                           if (n < 2 || n > 64) throw ConfigError(k, "must be between 2 and 64");
                           c.n_max = static_cast<int>(n);
                         },
                         [](const RunConfig& c) { return json(c.n_max); }};

    rate("dissipation.kappa", &LindbladRates::kappa);
    rate("dissipation.gamma", &LindbladRates::gamma);
    rate("dissipation.gamma_phi", &LindbladRates::gamma_phi);
    t["dissipation.rel_tol"] = {[](RunConfig& c, const std::string& k, const json& v) { c.integrator.rel_tol = positive(k, v); },
                                [](const RunConfig& c) { return json(c.integrator.rel_tol); }};
    t["dissipation.abs_tol"] = {[](RunConfig& c, const std::string& k, const json& v) { c.integrator.abs_tol = positive(k, v); },
                                [](const RunConfig& c) { return json(c.integrator.abs_tol); }};
    t["dissipation.initialization.enabled"] = {
        [](RunConfig& c, const std::string& k, const json& v) { c.initialize = as_bool(k, v); },
        [](const RunConfig& c) { return json(c.initialize); }};
    num("dissipation.initialization.g_ancilla", &RunConfig::g_ancilla, positive);
    num("dissipation.initialization.fidelity_floor", &RunConfig::fidelity_floor, non_negative);
    pulse("dissipation.initialization.park_factor", &PulseSpec::park_factor);
    pulse("dissipation.initialization.sigma_factor", &PulseSpec::sigma_factor);
    pulse("dissipation.initialization.truncation", &PulseSpec::truncation);

    num("sweep.min", &RunConfig::sweep_min, as_number);
    num("sweep.max", &RunConfig::sweep_max, as_number);
    t["sweep.points"] = {[](RunConfig& c, const std::string& k, const json& v) {
                           c.points = count(k, v);
                           if (c.points == 0) throw ConfigError(k, "must be positive");
                         },
                         [](const RunConfig& c) { return json(c.points); }};
    t["sweep.spacing"] = {[](RunConfig& c, const std::string& k, const json& v) {
                            const std::string s = as_string(k, v);
                            if (s == "log") c.spacing = Spacing::Log;
                            else if (s == "linear") c.spacing = Spacing::Linear;
                            else throw ConfigError(k, "expected log or linear");
                          },
                          [](const RunConfig& c) { return json(c.spacing == Spacing::Log ? "log" : "linear"); }};
    t["sweep.threads"] = {[](RunConfig& c, const std::string& k, const json& v) { c.threads = count(k, v); },
                          [](const RunConfig& c) { return json(c.threads); }};
    num("sweep.prominence", &RunConfig::prominence, non_negative);
    num("sweep.window_min", &RunConfig::window_min, positive);
    num("sweep.window_max", &RunConfig::window_max, positive);

    str("output.csv", &RunConfig::csv);
    str("output.json", &RunConfig::json);
    str("output.log", &RunConfig::log);
    return t;
  }();
  return table;
}

void apply_value(RunConfig& cfg, const std::string& key, const json& value) {
  const auto it = fields().find(key);
  if (it == fields().end()) throw ConfigError(key, "unknown configuration key");
  it->second.set(cfg, key, value);
}

void apply_tree(RunConfig& cfg, const json& node, const std::string& prefix) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      // a nested section; leaf objects are never valid values
      bool is_section = false;
      for (const auto& [k, f] : fields()) {
        if (k.rfind(key + ".", 0) == 0) {
          is_section = true;
          break;
        }
      }
      if (!is_section) throw ConfigError(key, "unknown configuration section");
      apply_tree(cfg, *it, key);
    } else {
      apply_value(cfg, key, *it);
    }
  }
}

}  // namespace

void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value) {
  json v = json::parse(value, nullptr, false);
  if (v.is_discarded()) v = value;  // bare string
  apply_value(cfg, dotted_key, v);
}

void apply_config_text(RunConfig& cfg, const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("<file>", "top level must be an object");
  apply_tree(cfg, doc, "");
  validate(cfg);
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("<file>", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str());
}

void validate(const RunConfig& cfg) {
  try {
    (void)cfg.lattice();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("lattice", e.what());
  }
  if (cfg.spacing == Spacing::Log && !(cfg.sweep_min > 0.0)) throw ConfigError("sweep.min", "log spacing needs a positive minimum");
  if (cfg.points > 1 && !(cfg.sweep_max > cfg.sweep_min)) throw ConfigError("sweep.max", "must exceed sweep.min");
  if (!(cfg.window_max > cfg.window_min)) throw ConfigError("sweep.window_max", "must exceed sweep.window_min");
  if (cfg.n_max < 2) throw ConfigError("quench.n_max", "need at least 2 Fock states");
  if (cfg.samples < 2) throw ConfigError("quench.samples", "need at least 2 time samples");
  if (cfg.points == 0) throw ConfigError("sweep.points", "need at least one point");
  if (cfg.hopping == 0.0 && !cfg.t_end) throw ConfigError("physics.hopping", "J = 0 needs quench.t_end");
  if (cfg.mode == SweepMode::Open && cfg.representation != Representation::FullFock) {
    throw ConfigError("quench.representation", "open-system runs need full_fock");
  }
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, f] : fields()) keys.push_back(k);
  return keys;
}

std::string to_json_text(const RunConfig& cfg) {
  json out = json::object();
  for (const auto& [key, f] : fields()) {
    json* node = &out;
    std::size_t start = 0;
    for (std::size_t dot; (dot = key.find('.', start)) != std::string::npos; start = dot + 1) {
      node = &(*node)[key.substr(start, dot - start)];
    }
    (*node)[key.substr(start)] = f.get(cfg);
  }
  return out.dump(2);
}

}  // namespace jch
