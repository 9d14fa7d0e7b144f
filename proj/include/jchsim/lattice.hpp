#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace jch {

/// Undirected edge between two distinct sites, stored with first < second.
struct Edge {
  std::size_t first = 0;
  std::size_t second = 0;

  auto operator<=>(const Edge&) const = default;
};

/// Finite lattice of coupled resonators. Every edge carries the same photon
/// hopping amplitude J; edges are canonical (i < j), unique and in range.
class LatticeGraph {
 public:
  /// Throws std::invalid_argument on zero sites, self-loops, duplicate edges
  /// or out-of-range indices. Edges are canonicalized and sorted.
  LatticeGraph(std::size_t num_sites, std::vector<Edge> edges);

  /// Open chain 0-1-...-(L-1).
  static LatticeGraph chain(std::size_t num_sites);

  std::size_t num_sites() const noexcept { return num_sites_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Number of edges incident on `site`. Throws std::out_of_range.
  std::size_t connectivity(std::size_t site) const;

  bool connected(std::size_t a, std::size_t b) const;

 private:
  std::size_t num_sites_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> degree_;
};

/// Global hopping scale J * (sum_j nu_j) / L that separates the resonant
/// (0) and dispersive regimes.
double coupling_parameter(const LatticeGraph& graph, double hopping);

}  // namespace jch
