#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "jchsim/config.hpp"

namespace jch {

/// One detuning of a sweep. Correlations are signed; ratios are
/// |C| / Var_dimer. Failed points keep NaN observables and the error text.
struct SweepRecord {
  double delta_over_g = 0.0;
  double var_dimer_analytic = 0.0;
  double entropy_dimer_analytic = 0.0;
  double var_numeric = 0.0;
  double entropy_numeric = 0.0;
  std::vector<double> correlations;
  std::vector<double> ratios;
  double init_fidelity = 0.0;  // open sweeps with preparation only
  bool rwa_ok = false;
  bool near_resonance = false;
  bool failed = false;
  std::string error;
  std::vector<std::string> warnings;
};

struct SweepResult {
  SweepMode mode = SweepMode::Closed;
  bool has_init_fidelity = false;
  std::vector<std::string> pair_names;  // "ij", "ik", ... (site 0 against the others)
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<SweepRecord> records;
};

/// Pairs (0, s) for s = 1..L-1, named i, j, k, l, ... by site.
std::vector<std::pair<std::size_t, std::size_t>> correlation_pairs(std::size_t sites);
std::string pair_name(std::size_t a, std::size_t b);

/// One sweep point (never throws for physics failures; see `failed`).
SweepRecord sweep_point(const RunConfig& cfg, double delta_over_g);

/// Runs every grid point on a worker pool; records come back in grid
/// order and do not depend on the thread count. `progress` (optional) is
/// called after each finished point from the worker thread.
SweepResult sweep(const RunConfig& cfg, const std::function<void(std::size_t, std::size_t)>& progress = {});

/// Fixed header:
/// delta_over_g,var_dimer_analytic,c_ij,...,ratio_ij,...,var_numeric,
/// entropy_dimer_analytic,entropy_numeric[,init_fidelity],rwa_ok,near_resonance,status
void write_csv(std::ostream& out, const SweepResult& r);

/// Named numeric columns of a sweep CSV; failed rows are dropped.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<double> column(const std::string& name) const;
  bool has(const std::string& name) const;
};
CsvTable read_csv(std::istream& in);

struct Extremum {
  std::string curve;
  double delta_over_g = 0.0;       // refined by a parabola in log10(delta/g)
  double grid_delta_over_g = 0.0;  // raw grid point
  double value = 0.0;
  double prominence = 0.0;
};

struct ResonanceReport {
  std::vector<Extremum> resonances;       // per curve, ascending position
  std::vector<Extremum> anti_resonances;  // minima shared by every curve
  std::vector<std::string> warnings;
};

struct DetectionOptions {
  double prominence_fraction = 0.1;
  double window_min = 1.0;
  double window_max = 10.0;
  std::size_t min_window_points = 20;
  double shared_tolerance = 0.05;  // in log10(delta/g), for anti-resonances
};

/// Local maxima of each curve inside the open window with prominence of at
/// least prominence_fraction * (curve range in the window); anti-resonances
/// are minima found in every curve within shared_tolerance of each other.
ResonanceReport detect_resonances(const std::vector<double>& delta_over_g,
                                  const std::vector<std::pair<std::string, std::vector<double>>>& curves,
                                  const DetectionOptions& options = {});
ResonanceReport detect_resonances(const SweepResult& r, const DetectionOptions& options = {});
ResonanceReport detect_resonances(const CsvTable& table, const DetectionOptions& options = {});

/// Highest-prominence resonance of a curve, or nullptr.
const Extremum* strongest(const ResonanceReport& r, const std::string& curve);

std::string to_json_text(const ResonanceReport& r);

}  // namespace jch
