#include "jchsim/site_basis.hpp"

#include <stdexcept>

namespace jch {

SiteLabeledBasis::SiteLabeledBasis(LocalBasisKind kind, std::size_t num_sites,
                                   std::size_t labels_per_site, std::vector<std::uint16_t> labels,
                                   std::vector<std::uint16_t> occupations,
                                   std::optional<SiteSpace> site_space)
    : kind_(kind),
      num_sites_(num_sites),
      labels_per_site_(labels_per_site),
      dimension_(num_sites == 0 ? 0 : labels.size() / num_sites),
      labels_(std::move(labels)),
      occupations_(std::move(occupations)),
      site_space_(site_space) {
  if (num_sites_ == 0 || labels_.size() % num_sites_ != 0 || occupations_.size() != labels_.size()) {
    throw std::invalid_argument("inconsistent site-labeled basis");
  }
  if (kind_ == LocalBasisKind::Bare && !site_space_) {
    throw std::invalid_argument("bare site labels need the site space");
  }
}

namespace {

SiteLabeledBasis from_flat(const ProductBasis& basis, const std::vector<std::size_t>& flat) {
  const std::size_t L = basis.num_sites();
  std::vector<std::uint16_t> labels;
  std::vector<std::uint16_t> occ;
  labels.reserve(flat.size() * L);
  occ.reserve(flat.size() * L);
  for (std::size_t f : flat) {
    for (std::size_t i = 0; i < L; ++i) {
      const std::size_t local = basis.local_index_of(f, i);
      const LocalState s = basis.local_state(local);
      labels.push_back(static_cast<std::uint16_t>(local));
      occ.push_back(static_cast<std::uint16_t>(s.photons + s.tls));
    }
  }
  return SiteLabeledBasis(LocalBasisKind::Bare, L, basis.local_dim(), std::move(labels), std::move(occ),
                          basis.site_space());
}

}  // namespace

SiteLabeledBasis SiteLabeledBasis::from_product(const ProductBasis& basis) {
  std::vector<std::size_t> flat(basis.dimension());
  for (std::size_t k = 0; k < flat.size(); ++k) flat[k] = k;
  return from_flat(basis, flat);
}

SiteLabeledBasis SiteLabeledBasis::from_subspace(const Subspace& subspace) {
  return from_flat(subspace.parent(), subspace.indices());
}

int SiteLabeledBasis::photons(std::size_t k, std::size_t site) const {
  if (kind_ != LocalBasisKind::Bare) {
    throw std::logic_error("photon numbers are only defined for bare site labels");
  }
  const std::size_t per_photon = site_space_->has_ancilla ? 4 : 2;
  return label(k, site) / static_cast<int>(per_photon);
}

}  // namespace jch
