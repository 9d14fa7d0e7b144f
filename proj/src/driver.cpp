#include "jchsim/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "jchsim/analytic_dimer.hpp"
#include "jchsim/dynamics.hpp"
#include "jchsim/initialization.hpp"
#include "jchsim/observables.hpp"

namespace jch {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::vector<std::pair<std::size_t, std::size_t>> correlation_pairs(std::size_t sites) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t s = 1; s < sites; ++s) out.emplace_back(0, s);
  return out;
}

std::string pair_name(std::size_t a, std::size_t b) {
  auto letter = [](std::size_t s) {
    return s < 18 ? std::string(1, static_cast<char>('i' + s)) : "s" + std::to_string(s);
  };
  return letter(a) + letter(b);
}

namespace {

template <class Traj>
void fill_observables(SweepRecord& rec, const Traj& traj, double tau,
                      const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  rec.var_numeric = variance_time_avg_numeric(traj, 0, tau);
  rec.entropy_numeric = linear_entropy_time_avg(traj, 0, tau);
  for (auto [a, b] : pairs) {
    const double c = two_point_correlation(traj, a, b, tau);
    rec.correlations.push_back(c);
    rec.ratios.push_back(rec.var_dimer_analytic > 0.0 ? std::abs(c) / rec.var_dimer_analytic : kNaN);
  }
}

}  // namespace

SweepRecord sweep_point(const RunConfig& cfg, double x) {
  SweepRecord rec;
  rec.delta_over_g = x;
  const LatticeGraph lattice = cfg.lattice();
  const auto pairs = correlation_pairs(lattice.num_sites());
  try {
    const JCParams p = cfg.params(x);
    if (cfg.hopping > 0.0) {
      const EffectiveDimerHamiltonian h = dimer_effective(p, cfg.hopping);
      rec.var_dimer_analytic = variance_time_avg(h, cfg.hopping);
      rec.entropy_dimer_analytic = entropy_time_avg(h, cfg.hopping);
    }
    const RwaReport rwa = rwa_report(p, cfg.hopping, std::max<int>(3, static_cast<int>(lattice.num_sites())));
    rec.rwa_ok = rwa.passes();
    rec.near_resonance = rwa.near_resonance;

    const QuenchConfig q = cfg.quench_config(x);
    if (cfg.mode == SweepMode::Closed) {
      const ClosedQuenchResult res = quench(q);
      rec.warnings = res.warnings;
      fill_observables(rec, res.trajectory, res.tau, pairs);
    } else {
      DenseMatrix site_state;
      rec.init_fidelity = kNaN;
      if (cfg.initialize) {
        const InitializationResult init = initialize_with_ancilla(cfg.initialization_config(x));
        site_state = init.site_state;
        rec.init_fidelity = init.fidelity;
        rec.warnings = init.warnings;
      }
      const OpenQuenchResult res = quench_open({q, cfg.rates, cfg.integrator}, site_state);
      rec.warnings.insert(rec.warnings.end(), res.warnings.begin(), res.warnings.end());
      fill_observables(rec, res.trajectory, res.tau, pairs);
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
    rec.var_numeric = rec.entropy_numeric = kNaN;
    rec.correlations.assign(pairs.size(), kNaN);
    rec.ratios.assign(pairs.size(), kNaN);
  }
  return rec;
}

SweepResult sweep(const RunConfig& cfg, const std::function<void(std::size_t, std::size_t)>& progress) {
  validate(cfg);
  const std::vector<double> grid = cfg.grid();
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw ConfigError("sweep", "detuning grid must be strictly increasing");
  }
  SweepResult out;
  out.mode = cfg.mode;
  out.has_init_fidelity = cfg.mode == SweepMode::Open && cfg.initialize;
  out.pairs = correlation_pairs(cfg.lattice().num_sites());
  for (auto [a, b] : out.pairs) out.pair_names.push_back(pair_name(a, b));
  out.records.resize(grid.size());

  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, grid.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < grid.size();) {
      out.records[k] = sweep_point(cfg, grid[k]);
      const std::size_t d = done.fetch_add(1) + 1;
      if (progress) progress(d, grid.size());
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const SweepResult& r) {
  out << "delta_over_g,var_dimer_analytic";
  for (const auto& n : r.pair_names) out << ",c_" << n;
  for (const auto& n : r.pair_names) out << ",ratio_" << n;
  out << ",var_numeric,entropy_dimer_analytic,entropy_numeric";
  if (r.has_init_fidelity) out << ",init_fidelity";
  out << ",rwa_ok,near_resonance,status\n";
  for (const SweepRecord& rec : r.records) {
    out << fmt(rec.delta_over_g) << ',' << fmt(rec.var_dimer_analytic);
    for (double c : rec.correlations) out << ',' << fmt(c);
    for (double c : rec.ratios) out << ',' << fmt(c);
    out << ',' << fmt(rec.var_numeric) << ',' << fmt(rec.entropy_dimer_analytic) << ',' << fmt(rec.entropy_numeric);
    if (r.has_init_fidelity) out << ',' << fmt(rec.init_fidelity);
    out << ',' << (rec.rwa_ok ? 1 : 0) << ',' << (rec.near_resonance ? 1 : 0) << ','
        << (rec.failed ? "failed: " + sanitize(rec.error) : std::string("ok")) << '\n';
  }
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::invalid_argument("CSV has no column '" + name + "'");
  const auto idx = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[idx]);
  return out;
}

bool CsvTable::has(const std::string& name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  t.columns = split(line);
  const auto status_it = std::find(t.columns.begin(), t.columns.end(), "status");
  const long status_idx = status_it == t.columns.end() ? -1 : static_cast<long>(status_it - t.columns.begin());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != t.columns.size()) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(t.columns.size()));
    }
    if (status_idx >= 0 && cells[static_cast<std::size_t>(status_idx)] != "ok") continue;
    std::vector<double> row;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (static_cast<long>(c) == status_idx) {
        row.push_back(kNaN);
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(cells[c].c_str(), &end);
      row.push_back(end != cells[c].c_str() ? v : kNaN);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

namespace {

struct Point {
  double u;  // log10(delta/g)
  double y;
};

// Vertex of the parabola through three points, clamped to their span.
std::pair<double, double> refine(const Point& a, const Point& b, const Point& c) {
  const double p = (b.u - a.u) * (b.y - c.y);
  const double q = (b.u - c.u) * (b.y - a.y);
  const double denom = p - q;
  if (denom == 0.0) return {b.u, b.y};
  double u = b.u - 0.5 * ((b.u - a.u) * p - (b.u - c.u) * q) / denom;
  u = std::clamp(u, a.u, c.u);
  // Lagrange form for the value
  const double la = (u - b.u) * (u - c.u) / ((a.u - b.u) * (a.u - c.u));
  const double lb = (u - a.u) * (u - c.u) / ((b.u - a.u) * (b.u - c.u));
  const double lc = (u - a.u) * (u - b.u) / ((c.u - a.u) * (c.u - b.u));
  return {u, la * a.y + lb * b.y + lc * c.y};
}

// Prominent local maxima of pts (sign = -1 finds minima).
std::vector<Extremum> extrema(const std::string& name, const std::vector<Point>& pts, double sign, double fraction) {
  std::vector<Extremum> out;
  if (pts.size() < 3) return out;
  std::vector<double> y(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) y[k] = sign * pts[k].y;
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    if (!(y[k] > y[k - 1] && y[k] >= y[k + 1])) continue;
    double left_min = y[k];
    for (std::size_t m = k; m-- > 0;) {
      if (y[m] > y[k]) break;
      left_min = std::min(left_min, y[m]);
    }
    double right_min = y[k];
    for (std::size_t m = k + 1; m < y.size(); ++m) {
      if (y[m] > y[k]) break;
      right_min = std::min(right_min, y[m]);
    }
    const double prom = y[k] - std::max(left_min, right_min);
    if (!(prom > 0.0) || prom < fraction * range) continue;
    const auto [u, v] = refine({pts[k - 1].u, y[k - 1]}, {pts[k].u, y[k]}, {pts[k + 1].u, y[k + 1]});
    out.push_back({name, std::pow(10.0, u), std::pow(10.0, pts[k].u), sign * v, prom});
  }
  return out;
}

}  // namespace

ResonanceReport detect_resonances(const std::vector<double>& x,
                                  const std::vector<std::pair<std::string, std::vector<double>>>& curves,
                                  const DetectionOptions& opt) {
  ResonanceReport rep;
  std::vector<std::vector<Extremum>> minima;
  for (const auto& [name, values] : curves) {
    if (values.size() != x.size()) throw std::invalid_argument("curve '" + name + "' does not match the grid");
    std::vector<Point> pts;
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] > opt.window_min && x[k] < opt.window_max && std::isfinite(values[k]) && x[k] > 0.0) {
        pts.push_back({std::log10(x[k]), values[k]});
      }
    }
    if (pts.size() < opt.min_window_points) {
      rep.warnings.push_back("curve " + name + " has only " + std::to_string(pts.size()) +
                             " points inside the detection window");
    }
    auto peaks = extrema(name, pts, 1.0, opt.prominence_fraction);
    rep.resonances.insert(rep.resonances.end(), peaks.begin(), peaks.end());
    minima.push_back(extrema(name, pts, -1.0, opt.prominence_fraction));
  }
  if (!minima.empty()) {
    for (const Extremum& m : minima.front()) {
      double log_sum = std::log10(m.delta_over_g);
      double value_sum = m.value;
      double prom = m.prominence;
      bool shared = true;
      for (std::size_t c = 1; c < minima.size() && shared; ++c) {
        const Extremum* best = nullptr;
        for (const Extremum& other : minima[c]) {
          const double d = std::abs(std::log10(other.delta_over_g) - std::log10(m.delta_over_g));
          if (d <= opt.shared_tolerance &&
              (!best || d < std::abs(std::log10(best->delta_over_g) - std::log10(m.delta_over_g)))) {
            best = &other;
          }
        }
        if (!best) {
          shared = false;
        } else {
          log_sum += std::log10(best->delta_over_g);
          value_sum += best->value;
          prom = std::min(prom, best->prominence);
        }
      }
      if (!shared) continue;
      const double n = static_cast<double>(minima.size());
      rep.anti_resonances.push_back({"shared", std::pow(10.0, log_sum / n), m.grid_delta_over_g, value_sum / n, prom});
    }
  }
  return rep;
}

ResonanceReport detect_resonances(const SweepResult& r, const DetectionOptions& opt) {
  std::vector<double> x;
  for (const auto& rec : r.records) x.push_back(rec.delta_over_g);
  std::vector<std::pair<std::string, std::vector<double>>> curves;
  for (std::size_t c = 0; c < r.pair_names.size(); ++c) {
    std::vector<double> v;
    for (const auto& rec : r.records) v.push_back(rec.failed ? kNaN : rec.ratios[c]);
    curves.emplace_back("ratio_" + r.pair_names[c], std::move(v));
  }
  return detect_resonances(x, curves, opt);
}

ResonanceReport detect_resonances(const CsvTable& t, const DetectionOptions& opt) {
  std::vector<std::pair<std::string, std::vector<double>>> curves;
  for (const auto& name : t.columns) {
    if (name.rfind("ratio_", 0) == 0) curves.emplace_back(name, t.column(name));
  }
  if (curves.empty()) throw std::invalid_argument("CSV has no ratio_* columns");
  return detect_resonances(t.column("delta_over_g"), curves, opt);
}

const Extremum* strongest(const ResonanceReport& r, const std::string& curve) {
  const Extremum* best = nullptr;
  for (const Extremum& e : r.resonances) {
    if (e.curve == curve && (!best || e.prominence > best->prominence)) best = &e;
  }
  return best;
}

std::string to_json_text(const ResonanceReport& r) {
  using nlohmann::json;
  auto list = [](const std::vector<Extremum>& v) {
    json a = json::array();
    for (const Extremum& e : v) {
      a.push_back({{"curve", e.curve},
                   {"delta_over_g", e.delta_over_g},
                   {"grid_delta_over_g", e.grid_delta_over_g},
                   {"value", e.value},
                   {"prominence", e.prominence}});
    }
    return a;
  };
  json out{{"resonances", list(r.resonances)}, {"anti_resonances", list(r.anti_resonances)}};
  if (!r.warnings.empty()) out["warnings"] = r.warnings;
  return out.dump(2);
}

}  // namespace jch
