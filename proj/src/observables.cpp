#include "jchsim/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace jch {

double time_average(const TimeSeries& series, double tau) {
  const auto& t = series.times;
  const auto& v = series.values;
  if (!(tau > 0.0)) throw std::invalid_argument("averaging window must be positive");
  if (t.size() != v.size() || t.size() < 2) throw std::invalid_argument("time series needs at least two samples");
  if (std::abs(t.front()) > 1e-12 * tau) throw std::invalid_argument("time series must start at t = 0");
  if (t.back() < tau * (1.0 - 1e-12)) throw std::invalid_argument("trajectory is shorter than the averaging window");
  double acc = 0.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    const double a = t[k - 1];
    if (a >= tau) break;
    const double b = std::min(t[k], tau);
    double vb = v[k];
    if (t[k] > tau) vb = v[k - 1] + (v[k] - v[k - 1]) * (tau - a) / (t[k] - a);
    acc += 0.5 * (v[k - 1] + vb) * (b - a);
  }
  return acc / tau;
}

namespace {

void check_site(const SiteLabeledBasis& b, std::size_t site) {
  if (site >= b.num_sites()) throw std::out_of_range("site index out of range");
}

double weight(const StateVector& psi, std::size_t k) { return std::norm(psi(static_cast<Eigen::Index>(k))); }
double weight(const DenseMatrix& rho, std::size_t k) {
  return rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
}

// Expectation of a function of the site occupations (diagonal in the basis).
template <class State, class F>
double diagonal_expectation(const SiteLabeledBasis& b, const State& s, F f) {
  double acc = 0.0;
  for (std::size_t k = 0; k < b.dimension(); ++k) acc += weight(s, k) * f(k);
  return acc;
}

template <class Traj, class F>
TimeSeries series(const Traj& traj, F per_state) {
  if (!traj.basis) throw std::invalid_argument("trajectory without a basis");
  if (traj.times.size() != traj.states.size()) throw std::invalid_argument("trajectory times and states differ in length");
  TimeSeries out;
  out.times = traj.times;
  out.values.reserve(traj.states.size());
  for (const auto& s : traj.states) out.values.push_back(per_state(s));
  return out;
}

template <class Traj>
TimeSeries number_impl(const Traj& traj, std::size_t site) {
  check_site(*traj.basis, site);
  const SiteLabeledBasis& b = *traj.basis;
  return series(traj, [&](const auto& s) {
    return diagonal_expectation(b, s, [&](std::size_t k) { return double(b.occupation(k, site)); });
  });
}

template <class Traj>
TimeSeries variance_impl(const Traj& traj, std::size_t site) {
  check_site(*traj.basis, site);
  const SiteLabeledBasis& b = *traj.basis;
  return series(traj, [&](const auto& s) {
    const double n1 = diagonal_expectation(b, s, [&](std::size_t k) { return double(b.occupation(k, site)); });
    const double n2 = diagonal_expectation(b, s, [&](std::size_t k) {
      const double n = b.occupation(k, site);
      return n * n;
    });
    return n2 - n1 * n1;
  });
}

template <class Traj>
TimeSeries correlation_impl(const Traj& traj, std::size_t i, std::size_t j) {
  check_site(*traj.basis, i);
  check_site(*traj.basis, j);
  if (i == j) throw std::invalid_argument("two-point correlation needs distinct sites");
  const SiteLabeledBasis& b = *traj.basis;
  return series(traj, [&](const auto& s) {
    const double ni = diagonal_expectation(b, s, [&](std::size_t k) { return double(b.occupation(k, i)); });
    const double nj = diagonal_expectation(b, s, [&](std::size_t k) { return double(b.occupation(k, j)); });
    const double nij = diagonal_expectation(b, s, [&](std::size_t k) {
      return double(b.occupation(k, i)) * double(b.occupation(k, j));
    });
    return nij - ni * nj;
  });
}

// Basis vectors grouped by the labels of every other site; within a group
// only the label of `site` varies.
struct SitePartition {
  std::size_t local_dim = 0;
  std::vector<std::vector<std::pair<std::uint16_t, std::size_t>>> groups;
};

SitePartition partition(const SiteLabeledBasis& b, std::size_t site) {
  check_site(b, site);
  std::map<std::vector<std::uint16_t>, std::size_t> key_to_group;
  SitePartition p;
  p.local_dim = b.labels_per_site();
  std::vector<std::uint16_t> key(b.num_sites() - 1);
  for (std::size_t k = 0; k < b.dimension(); ++k) {
    std::size_t pos = 0;
    for (std::size_t s = 0; s < b.num_sites(); ++s) {
      if (s != site) key[pos++] = b.label(k, s);
    }
    auto [it, inserted] = key_to_group.try_emplace(key, p.groups.size());
    if (inserted) p.groups.emplace_back();
    p.groups[it->second].emplace_back(b.label(k, site), k);
  }
  return p;
}

DenseMatrix reduce(const SitePartition& p, const StateVector& psi) {
  const auto d = static_cast<Eigen::Index>(p.local_dim);
  DenseMatrix out = DenseMatrix::Zero(d, d);
  StateVector v(d);
  for (const auto& g : p.groups) {
    v.setZero();
    for (auto [label, k] : g) v(label) = psi(static_cast<Eigen::Index>(k));
    out.noalias() += v * v.adjoint();
  }
  return out;
}

DenseMatrix reduce(const SitePartition& p, const DenseMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(p.local_dim);
  DenseMatrix out = DenseMatrix::Zero(d, d);
  for (const auto& g : p.groups) {
    for (auto [la, ka] : g) {
      for (auto [lb, kb] : g) out(la, lb) += rho(static_cast<Eigen::Index>(ka), static_cast<Eigen::Index>(kb));
    }
  }
  return out;
}

template <class Traj>
TimeSeries entropy_impl(const Traj& traj, std::size_t site) {
  if (!traj.basis) throw std::invalid_argument("trajectory without a basis");
  const SitePartition p = partition(*traj.basis, site);
  return series(traj, [&](const auto& s) { return 1.0 - reduce(p, s).squaredNorm(); });
}

}  // namespace

TimeSeries polariton_number_series(const StateTrajectory& t, std::size_t i) { return number_impl(t, i); }
TimeSeries polariton_number_series(const DensityTrajectory& t, std::size_t i) { return number_impl(t, i); }
TimeSeries variance_series(const StateTrajectory& t, std::size_t i) { return variance_impl(t, i); }
TimeSeries variance_series(const DensityTrajectory& t, std::size_t i) { return variance_impl(t, i); }
TimeSeries correlation_series(const StateTrajectory& t, std::size_t i, std::size_t j) { return correlation_impl(t, i, j); }
TimeSeries correlation_series(const DensityTrajectory& t, std::size_t i, std::size_t j) { return correlation_impl(t, i, j); }
TimeSeries linear_entropy_series(const StateTrajectory& t, std::size_t i) { return entropy_impl(t, i); }
TimeSeries linear_entropy_series(const DensityTrajectory& t, std::size_t i) { return entropy_impl(t, i); }

double variance_time_avg_numeric(const StateTrajectory& t, std::size_t i, double tau) {
  return time_average(variance_series(t, i), tau);
}
double variance_time_avg_numeric(const DensityTrajectory& t, std::size_t i, double tau) {
  return time_average(variance_series(t, i), tau);
}
double linear_entropy_time_avg(const StateTrajectory& t, std::size_t i, double tau) {
  return time_average(linear_entropy_series(t, i), tau);
}
double linear_entropy_time_avg(const DensityTrajectory& t, std::size_t i, double tau) {
  return time_average(linear_entropy_series(t, i), tau);
}
double two_point_correlation(const StateTrajectory& t, std::size_t i, std::size_t j, double tau) {
  return time_average(correlation_series(t, i, j), tau);
}
double two_point_correlation(const DensityTrajectory& t, std::size_t i, std::size_t j, double tau) {
  return time_average(correlation_series(t, i, j), tau);
}

DenseMatrix reduced_density_matrix(const SiteLabeledBasis& basis, const StateVector& psi, std::size_t site) {
  if (static_cast<std::size_t>(psi.size()) != basis.dimension()) throw std::invalid_argument("state does not match the basis");
  return reduce(partition(basis, site), psi);
}

DenseMatrix reduced_density_matrix(const SiteLabeledBasis& basis, const DenseMatrix& rho, std::size_t site) {
  if (static_cast<std::size_t>(rho.rows()) != basis.dimension() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("density matrix does not match the basis");
  }
  return reduce(partition(basis, site), rho);
}

namespace {

using Site = std::pair<int, Branch>;
constexpr Site kVac{0, Branch::Lower};
constexpr Site kOneMinus{1, Branch::Lower};

Site lower(int n) { return {n, Branch::Lower}; }

const std::map<std::string, std::vector<Site>>& dimer_labels() {
  static const std::map<std::string, std::vector<Site>> m{
      {"psi0", {kOneMinus, kOneMinus}},
      {"psi2+_i", {{2, Branch::Upper}, kVac}},
      {"psi2-_i", {lower(2), kVac}},
      {"psi2+_j", {kVac, {2, Branch::Upper}}},
      {"psi2-_j", {kVac, lower(2)}},
      {"psi1+_i", {{1, Branch::Upper}, kOneMinus}},
      {"psi1+_j", {kOneMinus, {1, Branch::Upper}}},
      {"psi1+_ij", {{1, Branch::Upper}, {1, Branch::Upper}}},
  };
  return m;
}

const std::map<std::string, std::vector<Site>>& trimer_labels() {
  static const std::map<std::string, std::vector<Site>> m{
      {"psi0", {kOneMinus, kOneMinus, kOneMinus}},
      {"psi3i", {lower(3), kVac, kVac}},
      {"psi3j", {kVac, lower(3), kVac}},
      {"psi3k", {kVac, kVac, lower(3)}},
      {"psi2i1j", {lower(2), lower(1), kVac}},
      {"psi1j2k", {kVac, lower(1), lower(2)}},
      {"psi1i2j", {lower(1), lower(2), kVac}},
      {"psi2j1k", {kVac, lower(2), lower(1)}},
      {"psi2i1k", {lower(2), kVac, lower(1)}},
      {"psi1i2k", {lower(1), kVac, lower(2)}},
  };
  return m;
}

}  // namespace

PopulationLabel population_label(const std::string& name, std::size_t num_sites) {
  if (num_sites == 2) {
    if (auto it = dimer_labels().find(name); it != dimer_labels().end()) return {name, it->second};
  } else if (num_sites == 3) {
    if (auto it = trimer_labels().find(name); it != trimer_labels().end()) return {name, it->second};
  }
  if (name == "psi0" && num_sites > 0) return {name, std::vector<Site>(num_sites, kOneMinus)};
  throw std::invalid_argument("unknown population label '" + name + "' for " + std::to_string(num_sites) + " sites");
}

std::vector<std::string> population_label_names(std::size_t num_sites) {
  if (num_sites == 2) return {"psi0", "psi2+_i", "psi2-_i", "psi2+_j", "psi2-_j", "psi1+_i", "psi1+_j", "psi1+_ij"};
  if (num_sites == 3) {
    return {"psi0", "psi3i", "psi3j", "psi3k", "psi2i1j", "psi1j2k", "psi1i2j", "psi2j1k", "psi2i1k", "psi1i2k"};
  }
  return {"psi0"};
}

namespace {

// <label | |n, branch>> for one site.
double local_amplitude(const SiteLabeledBasis& b, std::uint16_t label, Site s, const JCParams& p) {
  const auto [n, branch] = s;
  if (b.kind() == LocalBasisKind::LowerPolariton) {
    return (branch == Branch::Lower && label == n) ? 1.0 : 0.0;
  }
  const SiteSpace& space = *b.site_space();
  const std::size_t per_fock = space.has_ancilla ? 4 : 2;
  if (space.has_ancilla && label % 2 != 0) return 0.0;  // ancilla up
  const int photons = static_cast<int>(label / per_fock);
  const int tls = static_cast<int>((label / (space.has_ancilla ? 2 : 1)) % 2);
  if (n == 0) return (photons == 0 && tls == 0) ? 1.0 : 0.0;
  const PolaritonCoeffs c = coefficients(n, p);
  if (tls == 0 && photons == n) return c.gamma(branch);
  if (tls == 1 && photons == n - 1) return c.rho(branch);
  return 0.0;
}

}  // namespace

StateVector dressed_product_state(const SiteLabeledBasis& basis, const PopulationLabel& label, const JCParams& p) {
  if (label.sites.size() != basis.num_sites()) throw std::invalid_argument("label and basis disagree on the number of sites");
  StateVector v(static_cast<Eigen::Index>(basis.dimension()));
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    double amp = 1.0;
    for (std::size_t s = 0; s < basis.num_sites() && amp != 0.0; ++s) {
      amp *= local_amplitude(basis, basis.label(k, s), label.sites[s], p);
    }
    v(static_cast<Eigen::Index>(k)) = amp;
  }
  return v;
}

namespace {

template <class Traj, class F>
std::vector<TimeSeries> populations_impl(const Traj& traj, const JCParams& p, const std::vector<std::string>& labels,
                                         F overlap) {
  if (!traj.basis) throw std::invalid_argument("trajectory without a basis");
  std::vector<TimeSeries> out;
  for (const std::string& name : labels) {
    const StateVector v = dressed_product_state(*traj.basis, population_label(name, traj.basis->num_sites()), p);
    out.push_back(series(traj, [&](const auto& s) { return overlap(v, s); }));
  }
  return out;
}

}  // namespace

std::vector<TimeSeries> labeled_populations(const StateTrajectory& traj, const JCParams& p,
                                            const std::vector<std::string>& labels) {
  return populations_impl(traj, p, labels, [](const StateVector& v, const StateVector& psi) { return std::norm(v.dot(psi)); });
}

std::vector<TimeSeries> labeled_populations(const DensityTrajectory& traj, const JCParams& p,
                                            const std::vector<std::string>& labels) {
  return populations_impl(traj, p, labels,
                          [](const StateVector& v, const DenseMatrix& rho) { return (v.adjoint() * rho * v).value().real(); });
}

}  // namespace jch
