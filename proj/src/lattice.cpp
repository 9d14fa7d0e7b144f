#include "jchsim/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace jch {

LatticeGraph::LatticeGraph(std::size_t num_sites, std::vector<Edge> edges)
    : num_sites_(num_sites), edges_(std::move(edges)), degree_(num_sites, 0) {
  if (num_sites_ == 0) {
    throw std::invalid_argument("lattice needs at least one site");
  }
  for (auto& e : edges_) {
    if (e.first == e.second) {
      throw std::invalid_argument("self-loop on site " + std::to_string(e.first));
    }
    if (e.first >= num_sites_ || e.second >= num_sites_) {
      throw std::invalid_argument("edge (" + std::to_string(e.first) + ", " +
                                  std::to_string(e.second) + ") out of range for " +
                                  std::to_string(num_sites_) + " sites");
    }
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges_.begin(), edges_.end());
  if (auto dup = std::adjacent_find(edges_.begin(), edges_.end()); dup != edges_.end()) {
    throw std::invalid_argument("duplicate edge (" + std::to_string(dup->first) + ", " +
                                std::to_string(dup->second) + ")");
  }
  for (const auto& e : edges_) {
    ++degree_[e.first];
    ++degree_[e.second];
  }
}

LatticeGraph LatticeGraph::chain(std::size_t num_sites) {
  if (num_sites == 0) throw std::invalid_argument("chain needs at least one site");
  std::vector<Edge> edges;
  edges.reserve(num_sites - 1);
  for (std::size_t i = 0; i + 1 < num_sites; ++i) edges.push_back({i, i + 1});
  return LatticeGraph(num_sites, std::move(edges));
}

std::size_t LatticeGraph::connectivity(std::size_t site) const {
  if (site >= num_sites_) {
    throw std::out_of_range("site " + std::to_string(site) + " out of range");
  }
  return degree_[site];
}

bool LatticeGraph::connected(std::size_t a, std::size_t b) const {
  const Edge key{std::min(a, b), std::max(a, b)};
  return std::binary_search(edges_.begin(), edges_.end(), key);
}

double coupling_parameter(const LatticeGraph& graph, double hopping) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < graph.num_sites(); ++i) total += graph.connectivity(i);
  return hopping * static_cast<double>(total) / static_cast<double>(graph.num_sites());
}

}  // namespace jch
