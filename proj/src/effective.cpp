#include "jchsim/effective.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace jch {

std::size_t effective_dimension(std::size_t sites, int excitations) {
  if (sites == 0) throw std::invalid_argument("need at least one site");
  if (excitations < 0) throw std::invalid_argument("excitation number must be non-negative");
  // binomial(N + d - 1, d - 1), multiplicatively; every partial product is an integer
  const std::size_t n = static_cast<std::size_t>(excitations) + sites - 1;
  const std::size_t k = std::min(sites - 1, static_cast<std::size_t>(excitations));
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

namespace {

void enumerate(std::size_t site, int remaining, std::vector<int>& current,
               std::vector<std::vector<int>>& out) {
  if (site + 1 == current.size()) {
    current[site] = remaining;
    out.push_back(current);
    return;
  }
  for (int n = 0; n <= remaining; ++n) {
    current[site] = n;
    enumerate(site + 1, remaining - n, current, out);
  }
}

}  // namespace

LowerBranchBasis::LowerBranchBasis(std::size_t sites, int excitations)
    : sites_(sites), excitations_(excitations) {
  if (sites == 0) throw std::invalid_argument("need at least one site");
  if (excitations < 0) throw std::invalid_argument("excitation number must be non-negative");
  std::vector<int> current(sites, 0);
  enumerate(0, excitations, current, tuples_);
}

std::size_t LowerBranchBasis::index(std::span<const int> occupations) const {
  const auto it = std::lower_bound(tuples_.begin(), tuples_.end(), occupations,
                                   [](const std::vector<int>& a, std::span<const int> b) {
                                     return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
                                   });
  if (it == tuples_.end() || !std::equal(it->begin(), it->end(), occupations.begin(), occupations.end())) {
    throw std::out_of_range("occupation tuple not in the lower-branch basis");
  }
  return static_cast<std::size_t>(it - tuples_.begin());
}

SiteLabeledBasis LowerBranchBasis::site_labels() const {
  std::vector<std::uint16_t> labels;
  labels.reserve(tuples_.size() * sites_);
  for (const auto& t : tuples_) {
    for (int n : t) labels.push_back(static_cast<std::uint16_t>(n));
  }
  std::vector<std::uint16_t> occupations = labels;
  return SiteLabeledBasis(LocalBasisKind::LowerPolariton, sites_,
                          static_cast<std::size_t>(excitations_) + 1, std::move(labels),
                          std::move(occupations));
}

EffectiveHamiltonian polariton_hamiltonian(const LatticeGraph& graph, const JCParams& p,
                                           double hopping, const LowerBranchBasis& basis) {
  if (graph.num_sites() != basis.num_sites()) {
    throw std::invalid_argument("basis and lattice disagree on the number of sites");
  }
  const int N = basis.excitations();
  std::vector<double> energy(static_cast<std::size_t>(N) + 1, 0.0);
  std::vector<double> t(static_cast<std::size_t>(N) + 1, 0.0);  // t[n] = t_n^{--}
  for (int n = 1; n <= N; ++n) {
    energy[static_cast<std::size_t>(n)] = polariton_energy(n, Branch::Lower, p);
    t[static_cast<std::size_t>(n)] = hopping_element(n, Branch::Lower, Branch::Lower, p);
  }

  std::vector<Eigen::Triplet<Complex>> triplets;
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    const auto& occ = basis.tuples()[k];
    double diag = 0.0;
    for (int n : occ) diag += energy[static_cast<std::size_t>(n)];
    triplets.emplace_back(static_cast<int>(k), static_cast<int>(k), diag);
    if (hopping == 0.0) continue;
    for (const Edge& e : graph.edges()) {
      for (auto [from, to] : {std::pair{e.first, e.second}, std::pair{e.second, e.first}}) {
        const int nf = occ[from];
        const int nt = occ[to];
        if (nf == 0) continue;
        std::vector<int> target = occ;
        --target[from];
        ++target[to];
        const std::size_t row = basis.index(target);
        const double amp = -hopping * t[static_cast<std::size_t>(nf)] * t[static_cast<std::size_t>(nt + 1)];
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(k), amp);
      }
    }
  }

  EffectiveHamiltonian out;
  const auto d = static_cast<Eigen::Index>(basis.dimension());
  out.matrix.resize(d, d);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  out.rwa = rwa_report(p, hopping, std::max(3, N));
  out.advisory = !out.rwa.passes();
  return out;
}

Eigen::Matrix3d EffectiveDimerHamiltonian::matrix() const {
  Eigen::Matrix3d m;
  m << a, b, b, b, c, 0.0, b, 0.0, c;
  return m;
}

double dimer_hopping_product(const JCParams& p) {
  const double h1 = 0.5 * mixing_angle(1, p);
  const double h2 = 0.5 * mixing_angle(2, p);
  return std::cos(h1) * (std::sqrt(2.0) * std::cos(h1) * std::cos(h2) + std::sin(h1) * std::sin(h2));
}

EffectiveDimerHamiltonian dimer_effective(const JCParams& p, double hopping) {
  const double product = hopping_element(1, Branch::Lower, Branch::Lower, p) *
                         hopping_element(2, Branch::Lower, Branch::Lower, p);
  const double explicit_product = dimer_hopping_product(p);
  if (std::abs(product - explicit_product) > 1e-12) {
    throw std::logic_error("t1*t2 disagrees with the closed-form product");
  }
  EffectiveDimerHamiltonian h;
  h.a = 2.0 * polariton_energy(1, Branch::Lower, p);
  h.c = polariton_energy(2, Branch::Lower, p);
  h.b = -hopping * product;
  h.detuning = 2.0 * (polariton_energy(1, Branch::Lower, p) - p.omega()) -
               (polariton_energy(2, Branch::Lower, p) - 2.0 * p.omega());
  return h;
}

}  // namespace jch
