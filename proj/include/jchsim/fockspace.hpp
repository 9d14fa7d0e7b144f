#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "jchsim/lattice.hpp"
#include "jchsim/polariton.hpp"
#include "jchsim/types.hpp"

namespace jch {

/// Local Hilbert space of one lattice site: Fock states 0..n_max-1 times a
/// two-level system, optionally times an ancilla two-level system.
struct SiteSpace {
  int n_max = 5;
  bool has_ancilla = false;

  std::size_t local_dim() const noexcept {
    return static_cast<std::size_t>(2 * n_max) * (has_ancilla ? 2 : 1);
  }
};

/// One site's bare occupation: photons, TLS (0 = down, 1 = up), ancilla.
struct LocalState {
  int photons = 0;
  int tls = 0;
  int ancilla = 0;

  bool operator==(const LocalState&) const = default;
};

/// Tensor-product basis over L identical sites.
///
/// Flat index convention (frozen): site 0 is the slowest-varying factor,
/// and inside a site the local index is (photons * 2 + tls) * A + ancilla
/// with A = 2 when an ancilla is present, 1 otherwise.
class ProductBasis {
 public:
  static constexpr std::size_t kDefaultDimensionBudget = std::size_t{1} << 22;

  /// Throws std::invalid_argument for n_max < 2 or zero sites and
  /// std::length_error when the dimension exceeds `dimension_budget`.
  ProductBasis(std::size_t num_sites, SiteSpace site,
               std::size_t dimension_budget = kDefaultDimensionBudget);

  std::size_t num_sites() const noexcept { return num_sites_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t local_dim() const noexcept { return site_.local_dim(); }
  const SiteSpace& site_space() const noexcept { return site_; }

  std::size_t local_index(const LocalState& s) const;
  LocalState local_state(std::size_t local) const;

  std::size_t stride(std::size_t site) const { return strides_.at(site); }
  std::size_t local_index_of(std::size_t flat, std::size_t site) const {
    return (flat / strides_[site]) % local_dim();
  }
  LocalState site_state(std::size_t flat, std::size_t site) const {
    return local_state(local_index_of(flat, site));
  }

  std::size_t index(std::span<const LocalState> sites) const;
  std::vector<LocalState> decode(std::size_t flat) const;

  /// Photons plus TLS excitations summed over sites (ancillas optional).
  int excitations(std::size_t flat, bool include_ancilla = false) const;

 private:
  std::size_t num_sites_;
  SiteSpace site_;
  std::size_t dimension_;
  std::vector<std::size_t> strides_;
};

enum class SiteOperator {
  Annihilate,
  Create,
  PhotonNumber,
  SigmaMinus,
  SigmaPlus,
  SigmaZ,
  TlsNumber,
  PolaritonNumber,  // a^dag a + sigma^+ sigma^-
  AncillaSigmaMinus,
  AncillaSigmaPlus,
  AncillaSigmaZ,
  AncillaNumber,
};

/// Operator acting as `kind` on `site` and as identity elsewhere.
/// Truncation: a^dag |n_max-1> = 0. Ancilla kinds require an ancilla.
SparseMatrix site_operator(const ProductBasis& basis, SiteOperator kind, std::size_t site);

/// H = sum_i [omega a^dag a + omega0 s+ s- + g (s+ a + s- a^dag)]
///     - J sum_<ij> (a_i^dag a_j + a_j^dag a_i).
/// Ancilla factors (if any) are left idle.
SparseMatrix jch_hamiltonian(const LatticeGraph& graph, const JCParams& p, double hopping,
                             const ProductBasis& basis);

/// Total excitation number; ancilla excitations only when requested.
SparseMatrix total_excitations(const ProductBasis& basis, bool include_ancilla = false);

/// Single site with ancilla:
/// H = H_JC + omega_A sA+ sA- + g_A (sA+ a + sA- a^dag), on ProductBasis(1, {n_max, true}).
SparseMatrix ancilla_site_hamiltonian(const JCParams& p, double omega_ancilla, double g_ancilla,
                                      int n_max);

/// max |H - H^dag| relative to max |H| (0 for the zero matrix).
double hermiticity_defect(const SparseMatrix& op);
bool is_hermitian(const SparseMatrix& op, double rel_tol = 1e-12);

/// Subset of product-basis vectors spanning an operator-invariant subspace
/// (e.g. a fixed excitation sector). Operators and states are restricted to
/// and lifted from subspace coordinates.
class Subspace {
 public:
  Subspace(ProductBasis parent, std::vector<std::size_t> flat_indices);

  static Subspace excitation_sector(const ProductBasis& basis, int excitations);
  static Subspace excitations_up_to(const ProductBasis& basis, int max_excitations);

  const ProductBasis& parent() const noexcept { return parent_; }
  std::size_t dimension() const noexcept { return indices_.size(); }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

  /// P A P in subspace coordinates.
  SparseMatrix restrict(const SparseMatrix& op) const;
  StateVector restrict(const StateVector& psi) const;
  DenseMatrix restrict(const DenseMatrix& rho) const;
  StateVector lift(const StateVector& psi) const;

 private:
  ProductBasis parent_;
  std::vector<std::size_t> indices_;
  std::vector<long> position_;  // parent index -> subspace index, -1 if absent
};

}  // namespace jch
