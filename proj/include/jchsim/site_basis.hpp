#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "jchsim/fockspace.hpp"

namespace jch {

/// How a site label is to be read.
enum class LocalBasisKind {
  Bare,            // label is a ProductBasis local index (photons, tls[, ancilla])
  LowerPolariton,  // label n means the dressed state |n,->
};

/// Orthonormal basis whose vectors are products of orthonormal single-site
/// states, each identified by a per-site label. This is the common
/// representation the observables work on: the full product basis, an
/// invariant subspace of it, or the lower-branch effective space.
class SiteLabeledBasis {
 public:
  SiteLabeledBasis(LocalBasisKind kind, std::size_t num_sites, std::size_t labels_per_site,
                   std::vector<std::uint16_t> labels, std::vector<std::uint16_t> occupations,
                   std::optional<SiteSpace> site_space = std::nullopt);

  static SiteLabeledBasis from_product(const ProductBasis& basis);
  static SiteLabeledBasis from_subspace(const Subspace& subspace);

  LocalBasisKind kind() const noexcept { return kind_; }
  std::size_t num_sites() const noexcept { return num_sites_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t labels_per_site() const noexcept { return labels_per_site_; }

  /// Present for Bare bases.
  const std::optional<SiteSpace>& site_space() const noexcept { return site_space_; }

  std::uint16_t label(std::size_t k, std::size_t site) const { return labels_[k * num_sites_ + site]; }

  /// Polariton number n_i = a^dag a + s+ s- of basis vector k on `site`.
  int occupation(std::size_t k, std::size_t site) const { return occupations_[k * num_sites_ + site]; }

  /// Photon number of the label (Bare bases only; used for truncation checks).
  int photons(std::size_t k, std::size_t site) const;

 private:
  LocalBasisKind kind_;
  std::size_t num_sites_;
  std::size_t labels_per_site_;
  std::size_t dimension_;
  std::vector<std::uint16_t> labels_;
  std::vector<std::uint16_t> occupations_;
  std::optional<SiteSpace> site_space_;
};

}  // namespace jch
