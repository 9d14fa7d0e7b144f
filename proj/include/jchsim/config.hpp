#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "jchsim/dynamics.hpp"
#include "jchsim/initialization.hpp"
#include "jchsim/lattice.hpp"
#include "jchsim/polariton.hpp"

namespace jch {

/// Malformed configuration; the message names the offending dotted key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& key, const std::string& what)
      : std::runtime_error(key + ": " + what), key_(key) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class SweepMode { Closed, Open };
enum class Spacing { Log, Linear };

/// Everything a run needs. Sections of the JSON file map onto the field
/// groups below; see README for the key list.
struct RunConfig {
  SweepMode mode = SweepMode::Closed;

  // lattice
  std::string topology = "dimer";  // dimer | trimer | tetramer | chain | graph
  std::size_t sites = 2;
  std::vector<Edge> edges;  // topology = graph only

  // physics
  double omega = 1.0;
  double g = 1e-2;
  double delta_over_g = 1000.0;
  double hopping = 1e-4;

  // quench
  std::optional<double> t_end;
  std::size_t samples = 2000;
  bool auto_samples = true;
  Representation representation = Representation::FullFock;
  int n_max = 5;

  // dissipation
  LindbladRates rates;
  LindbladOptions integrator;
  bool initialize = false;  // prepare the open-system state with the ancilla protocol
  double g_ancilla = 50.0;
  PulseSpec pulse;
  double fidelity_floor = 0.90;

  // sweep
  double sweep_min = 0.1;
  double sweep_max = 100.0;
  std::size_t points = 120;
  Spacing spacing = Spacing::Log;
  std::size_t threads = 0;  // 0 = hardware concurrency
  double prominence = 0.1;
  double window_min = 1.0;
  double window_max = 10.0;

  // output
  std::string csv;
  std::string json;
  std::string log;

  LatticeGraph lattice() const;
  JCParams params(double delta_over_g) const;
  JCParams params() const { return params(delta_over_g); }
  QuenchConfig quench_config(double delta_over_g) const;
  InitializationConfig initialization_config(double delta_over_g) const;
  std::vector<double> grid() const;
};

/// Closed: omega = 1, g = 1e-2, J = 1e-4, 5 Fock states, dimer.
/// Open: omega = 5000, g = 200, J = 2, kappa = 0.225, gamma = 0.035,
/// gamma_phi = 0.045, 4 Fock states, trimer, ancilla preparation with g_A = 50.
RunConfig default_config(SweepMode mode);

/// Applies one dotted key (e.g. "physics.g") given as JSON text or a bare
/// string. Throws ConfigError for unknown keys and type or range errors.
void apply_override(RunConfig& cfg, const std::string& dotted_key, const std::string& value);

/// Applies a JSON document with the sections lattice, physics, quench,
/// dissipation, sweep and output.
void apply_config_text(RunConfig& cfg, const std::string& json_text);
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Re-checks cross-field constraints; throws ConfigError.
void validate(const RunConfig& cfg);

/// Every configuration key in dotted form.
std::vector<std::string> config_keys();

/// Parameter echo as a JSON object text.
std::string to_json_text(const RunConfig& cfg);

}  // namespace jch
