#include "jchsim/fockspace.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jch {

namespace {

using Triplet = Eigen::Triplet<Complex>;

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& triplets) {
  SparseMatrix m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

ProductBasis::ProductBasis(std::size_t num_sites, SiteSpace site, std::size_t dimension_budget)
    : num_sites_(num_sites), site_(site), dimension_(1), strides_(num_sites, 1) {
  if (num_sites_ == 0) throw std::invalid_argument("product basis needs at least one site");
  if (site_.n_max < 2) throw std::invalid_argument("Fock truncation n_max must be >= 2");
  const std::size_t local = site_.local_dim();
  for (std::size_t i = 0; i < num_sites_; ++i) {
    if (dimension_ > dimension_budget / local) {
      throw std::length_error("product basis dimension " + std::to_string(local) + "^" +
                              std::to_string(num_sites_) + " exceeds the budget of " +
                              std::to_string(dimension_budget));
    }
    dimension_ *= local;
  }
  // site 0 slowest: stride(i) = local^(L-1-i)
  for (std::size_t i = num_sites_; i-- > 0;) {
    strides_[i] = (i + 1 == num_sites_) ? 1 : strides_[i + 1] * local;
  }
}

std::size_t ProductBasis::local_index(const LocalState& s) const {
  const bool anc = site_.has_ancilla;
  if (s.photons < 0 || s.photons >= site_.n_max || s.tls < 0 || s.tls > 1 || s.ancilla < 0 ||
      s.ancilla > (anc ? 1 : 0)) {
    throw std::out_of_range("local state outside the site space");
  }
  const std::size_t base = static_cast<std::size_t>(s.photons * 2 + s.tls);
  return anc ? base * 2 + static_cast<std::size_t>(s.ancilla) : base;
}

LocalState ProductBasis::local_state(std::size_t local) const {
  LocalState s;
  if (site_.has_ancilla) {
    s.ancilla = static_cast<int>(local % 2);
    local /= 2;
  }
  s.tls = static_cast<int>(local % 2);
  s.photons = static_cast<int>(local / 2);
  return s;
}

std::size_t ProductBasis::index(std::span<const LocalState> sites) const {
  if (sites.size() != num_sites_) throw std::invalid_argument("wrong number of site states");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < num_sites_; ++i) flat += local_index(sites[i]) * strides_[i];
  return flat;
}

std::vector<LocalState> ProductBasis::decode(std::size_t flat) const {
  if (flat >= dimension_) throw std::out_of_range("flat index out of range");
  std::vector<LocalState> out(num_sites_);
  for (std::size_t i = 0; i < num_sites_; ++i) out[i] = site_state(flat, i);
  return out;
}

int ProductBasis::excitations(std::size_t flat, bool include_ancilla) const {
  int total = 0;
  for (std::size_t i = 0; i < num_sites_; ++i) {
    const LocalState s = site_state(flat, i);
    total += s.photons + s.tls + (include_ancilla ? s.ancilla : 0);
  }
  return total;
}

SparseMatrix site_operator(const ProductBasis& basis, SiteOperator kind, std::size_t site) {
  if (site >= basis.num_sites()) {
    throw std::out_of_range("site " + std::to_string(site) + " out of range");
  }
  const bool ancilla_kind = kind == SiteOperator::AncillaSigmaMinus ||
                            kind == SiteOperator::AncillaSigmaPlus ||
                            kind == SiteOperator::AncillaSigmaZ ||
                            kind == SiteOperator::AncillaNumber;
  if (ancilla_kind && !basis.site_space().has_ancilla) {
    throw std::invalid_argument("ancilla operator requested on a basis without ancillas");
  }

  const int n_max = basis.site_space().n_max;
  const std::size_t stride = basis.stride(site);
  std::vector<Triplet> triplets;
  triplets.reserve(basis.dimension());

  for (std::size_t col = 0; col < basis.dimension(); ++col) {
    const std::size_t old_local = basis.local_index_of(col, site);
    LocalState s = basis.local_state(old_local);
    double value = 0.0;
    switch (kind) {
      case SiteOperator::Annihilate:
        if (s.photons == 0) continue;
        value = std::sqrt(static_cast<double>(s.photons));
        --s.photons;
        break;
      case SiteOperator::Create:
        if (s.photons + 1 >= n_max) continue;
        ++s.photons;
        value = std::sqrt(static_cast<double>(s.photons));
        break;
      case SiteOperator::PhotonNumber:
        value = s.photons;
        break;
      case SiteOperator::SigmaMinus:
        if (s.tls == 0) continue;
        s.tls = 0;
        value = 1.0;
        break;
      case SiteOperator::SigmaPlus:
        if (s.tls == 1) continue;
        s.tls = 1;
        value = 1.0;
        break;
      case SiteOperator::SigmaZ:
        value = s.tls == 1 ? 1.0 : -1.0;
        break;
      case SiteOperator::TlsNumber:
        value = s.tls;
        break;
      case SiteOperator::PolaritonNumber:
        value = s.photons + s.tls;
        break;
      case SiteOperator::AncillaSigmaMinus:
        if (s.ancilla == 0) continue;
        s.ancilla = 0;
        value = 1.0;
        break;
      case SiteOperator::AncillaSigmaPlus:
        if (s.ancilla == 1) continue;
        s.ancilla = 1;
        value = 1.0;
        break;
      case SiteOperator::AncillaSigmaZ:
        value = s.ancilla == 1 ? 1.0 : -1.0;
        break;
      case SiteOperator::AncillaNumber:
        value = s.ancilla;
        break;
    }
    if (value == 0.0) continue;
    const std::size_t new_local = basis.local_index(s);
    const std::size_t row = col - old_local * stride + new_local * stride;
    triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), value);
  }
  return from_triplets(basis.dimension(), triplets);
}

SparseMatrix jch_hamiltonian(const LatticeGraph& graph, const JCParams& p, double hopping,
                             const ProductBasis& basis) {
  if (graph.num_sites() != basis.num_sites()) {
    throw std::invalid_argument("basis and lattice disagree on the number of sites");
  }
  const int n_max = basis.site_space().n_max;
  const std::size_t L = basis.num_sites();
  std::vector<Triplet> triplets;
  triplets.reserve(basis.dimension() * (1 + 2 * L + 2 * graph.edges().size()));

  for (std::size_t col = 0; col < basis.dimension(); ++col) {
    double diagonal = 0.0;
    for (std::size_t i = 0; i < L; ++i) {
      const std::size_t local = basis.local_index_of(col, i);
      const LocalState s = basis.local_state(local);
      diagonal += p.omega() * s.photons + p.omega0() * s.tls;
      // g (s+ a + s- a^dag): |down, n> <-> |up, n-1>
      if (s.tls == 0 && s.photons > 0) {
        LocalState t = s;
        --t.photons;
        t.tls = 1;
        const std::size_t row = col + (basis.local_index(t) - local) * basis.stride(i);
        const double v = p.g() * std::sqrt(static_cast<double>(s.photons));
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
        triplets.emplace_back(static_cast<int>(col), static_cast<int>(row), v);
      }
    }
    triplets.emplace_back(static_cast<int>(col), static_cast<int>(col), diagonal);

    if (hopping == 0.0) continue;
    for (const Edge& e : graph.edges()) {
      for (auto [from, to] : {std::pair{e.first, e.second}, std::pair{e.second, e.first}}) {
        const std::size_t lf = basis.local_index_of(col, from);
        const std::size_t lt = basis.local_index_of(col, to);
        LocalState sf = basis.local_state(lf);
        LocalState st = basis.local_state(lt);
        if (sf.photons == 0 || st.photons + 1 >= n_max) continue;
        const double v = -hopping * std::sqrt(static_cast<double>(sf.photons)) *
                         std::sqrt(static_cast<double>(st.photons + 1));
        --sf.photons;
        ++st.photons;
        const std::size_t row = col + (basis.local_index(sf) - lf) * basis.stride(from) +
                                (basis.local_index(st) - lt) * basis.stride(to);
        triplets.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
      }
    }
  }
  return from_triplets(basis.dimension(), triplets);
}

SparseMatrix total_excitations(const ProductBasis& basis, bool include_ancilla) {
  std::vector<Triplet> triplets;
  triplets.reserve(basis.dimension());
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    const int n = basis.excitations(k, include_ancilla);
    if (n != 0) triplets.emplace_back(static_cast<int>(k), static_cast<int>(k), n);
  }
  return from_triplets(basis.dimension(), triplets);
}

SparseMatrix ancilla_site_hamiltonian(const JCParams& p, double omega_ancilla, double g_ancilla,
                                      int n_max) {
  const ProductBasis basis(1, SiteSpace{n_max, true});
  const SparseMatrix a = site_operator(basis, SiteOperator::Annihilate, 0);
  const SparseMatrix sp = site_operator(basis, SiteOperator::AncillaSigmaPlus, 0);
  SparseMatrix coupling = sp * a;
  SparseMatrix h = jch_hamiltonian(LatticeGraph::chain(1), p, 0.0, basis);
  h += omega_ancilla * site_operator(basis, SiteOperator::AncillaNumber, 0);
  h += g_ancilla * (coupling + SparseMatrix(coupling.adjoint()));
  h.makeCompressed();
  return h;
}

double hermiticity_defect(const SparseMatrix& op) {
  const SparseMatrix diff = op - SparseMatrix(op.adjoint());
  double worst = 0.0;
  double scale = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  for (int k = 0; k < op.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(op, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  }
  return scale == 0.0 ? 0.0 : worst / scale;
}

bool is_hermitian(const SparseMatrix& op, double rel_tol) {
  return op.rows() == op.cols() && hermiticity_defect(op) <= rel_tol;
}

Subspace::Subspace(ProductBasis parent, std::vector<std::size_t> flat_indices)
    : parent_(std::move(parent)), indices_(std::move(flat_indices)), position_(parent_.dimension(), -1) {
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    const std::size_t flat = indices_[k];
    if (flat >= parent_.dimension() || position_[flat] != -1) {
      throw std::invalid_argument("subspace indices must be unique and in range");
    }
    position_[flat] = static_cast<long>(k);
  }
}

Subspace Subspace::excitation_sector(const ProductBasis& basis, int excitations) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    if (basis.excitations(k) == excitations) idx.push_back(k);
  }
  return Subspace(basis, std::move(idx));
}

Subspace Subspace::excitations_up_to(const ProductBasis& basis, int max_excitations) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < basis.dimension(); ++k) {
    if (basis.excitations(k) <= max_excitations) idx.push_back(k);
  }
  return Subspace(basis, std::move(idx));
}

SparseMatrix Subspace::restrict(const SparseMatrix& op) const {
  if (static_cast<std::size_t>(op.rows()) != parent_.dimension() ||
      static_cast<std::size_t>(op.cols()) != parent_.dimension()) {
    throw std::invalid_argument("operator dimension does not match the parent basis");
  }
  std::vector<Triplet> triplets;
  for (int k = 0; k < op.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(op, k); it; ++it) {
      const long r = position_[static_cast<std::size_t>(it.row())];
      const long c = position_[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) triplets.emplace_back(static_cast<int>(r), static_cast<int>(c), it.value());
    }
  }
  return from_triplets(dimension(), triplets);
}

StateVector Subspace::restrict(const StateVector& psi) const {
  if (static_cast<std::size_t>(psi.size()) != parent_.dimension()) {
    throw std::invalid_argument("state dimension does not match the parent basis");
  }
  StateVector out(static_cast<Eigen::Index>(dimension()));
  for (std::size_t k = 0; k < indices_.size(); ++k) out[static_cast<Eigen::Index>(k)] = psi[static_cast<Eigen::Index>(indices_[k])];
  return out;
}

DenseMatrix Subspace::restrict(const DenseMatrix& rho) const {
  if (static_cast<std::size_t>(rho.rows()) != parent_.dimension() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("matrix dimension does not match the parent basis");
  }
  const auto d = static_cast<Eigen::Index>(dimension());
  DenseMatrix out(d, d);
  for (Eigen::Index c = 0; c < d; ++c) {
    for (Eigen::Index r = 0; r < d; ++r) {
      out(r, c) = rho(static_cast<Eigen::Index>(indices_[static_cast<std::size_t>(r)]),
                      static_cast<Eigen::Index>(indices_[static_cast<std::size_t>(c)]));
    }
  }
  return out;
}

StateVector Subspace::lift(const StateVector& psi) const {
  if (static_cast<std::size_t>(psi.size()) != dimension()) {
    throw std::invalid_argument("state dimension does not match the subspace");
  }
  StateVector out = StateVector::Zero(static_cast<Eigen::Index>(parent_.dimension()));
  for (std::size_t k = 0; k < indices_.size(); ++k) out[static_cast<Eigen::Index>(indices_[k])] = psi[static_cast<Eigen::Index>(k)];
  return out;
}

}  // namespace jch
