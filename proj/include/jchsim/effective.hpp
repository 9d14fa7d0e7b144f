#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "jchsim/lattice.hpp"
#include "jchsim/polariton.hpp"
#include "jchsim/site_basis.hpp"
#include "jchsim/types.hpp"

namespace jch {

/// (N + d - 1)! / (N! (d - 1)!): ways to distribute N excitations on d sites.
std::size_t effective_dimension(std::size_t sites, int excitations);

/// Lower-polariton-branch basis: tuples (n_1..n_L) with sum N, each meaning
/// the product of dressed states |n_i,->. Tuples are in ascending
/// lexicographic order.
class LowerBranchBasis {
 public:
  LowerBranchBasis(std::size_t sites, int excitations);

  std::size_t num_sites() const noexcept { return sites_; }
  int excitations() const noexcept { return excitations_; }
  std::size_t dimension() const noexcept { return tuples_.size(); }
  const std::vector<std::vector<int>>& tuples() const noexcept { return tuples_; }

  /// Position of an occupation tuple. Throws std::out_of_range if absent.
  std::size_t index(std::span<const int> occupations) const;

  SiteLabeledBasis site_labels() const;

 private:
  std::size_t sites_;
  int excitations_;
  std::vector<std::vector<int>> tuples_;
};

inline LowerBranchBasis lower_branch_basis(std::size_t sites, int excitations) {
  return LowerBranchBasis(sites, excitations);
}

struct EffectiveHamiltonian {
  SparseMatrix matrix;
  RwaReport rwa;
  bool advisory = false;  // rotating-wave conditions violated; prefer full-space propagation
};

/// Lower-branch restriction of the polariton-basis Hamiltonian.
///
/// Diagonal: sum_i E_{n_i}^-. A hop of one excitation from site i to a
/// neighbour j, (.., n_i, .., n_j, ..) -> (.., n_i - 1, .., n_j + 1, ..),
/// has amplitude -J t_{n_i}^{--} t_{n_j + 1}^{--}: the product of the
/// lower-branch matrix elements <n_i - 1,-|a_i|n_i,-> and
/// <n_j + 1,-|a_j^dag|n_j,->.
EffectiveHamiltonian polariton_hamiltonian(const LatticeGraph& graph, const JCParams& p,
                                           double hopping, const LowerBranchBasis& basis);

/// 3x3 dimer Hamiltonian on {|1,-;1,->, |2,-;0,->, |0,-;2,->}:
/// [[a, b, b], [b, c, 0], [b, 0, c]].
struct EffectiveDimerHamiltonian {
  double a = 0.0;  // 2 E_1^-
  double b = 0.0;  // -J t_1^{--} t_2^{--}
  double c = 0.0;  // E_2^-

  // a - c, evaluated without the 2 omega cancellation.
  double detuning = 0.0;

  Eigen::Matrix3d matrix() const;
};

/// cos(theta1/2) (sqrt(2) cos(theta1/2) cos(theta2/2) + sin(theta1/2) sin(theta2/2)).
double dimer_hopping_product(const JCParams& p);

EffectiveDimerHamiltonian dimer_effective(const JCParams& p, double hopping);

}  // namespace jch
