#include "doctest.h"

#include "approx.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "jchsim/effective.hpp"
#include "jchsim/fockspace.hpp"

using namespace jch;
using doctest::Approx;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_SUITE("effective") {
  TEST_CASE("dimension matches the combinatorial formula") {
    for (std::size_t L = 1; L <= 6; ++L) {
      for (int N = 0; N <= 6; ++N) {
        const double expected = factorial(N + int(L) - 1) / (factorial(N) * factorial(int(L) - 1));
        CHECK(double(effective_dimension(L, N)) == expected);
        CHECK(double(lower_branch_basis(L, N).dimension()) == expected);
      }
    }
    CHECK(lower_branch_basis(3, 3).dimension() == 10);
    CHECK(lower_branch_basis(2, 2).dimension() == 3);
    CHECK(lower_branch_basis(4, 4).dimension() == 35);
  }

  TEST_CASE("tuples are unique and lexicographic") {
    const LowerBranchBasis b(3, 3);
    for (std::size_t k = 1; k < b.dimension(); ++k) CHECK(b.tuples()[k - 1] < b.tuples()[k]);
    for (std::size_t k = 0; k < b.dimension(); ++k) CHECK(b.index(b.tuples()[k]) == k);
    const std::vector<int> bad{4, 0, 0};
    CHECK_THROWS_AS(b.index(bad), std::out_of_range);
  }

  TEST_CASE("dimer matrix equals the 3x3 closed form") {
    for (double r : {0.0, 0.5, 5.0, 50.0}) {
      const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, r);
      const double J = 1e-4;
      const LowerBranchBasis b(2, 2);
      const Eigen::MatrixXcd m(polariton_hamiltonian(LatticeGraph::chain(2), p, J, b).matrix);
      const EffectiveDimerHamiltonian d = dimer_effective(p, J);
      // order the rows as (psi0, psi2_i, psi2_j)
      const std::size_t i0 = b.index(std::vector<int>{1, 1});
      const std::size_t i2 = b.index(std::vector<int>{2, 0});
      const std::size_t j2 = b.index(std::vector<int>{0, 2});
      const std::size_t order[3] = {i0, i2, j2};
      const Eigen::Matrix3d ref = d.matrix();
      for (int r1 = 0; r1 < 3; ++r1) {
        for (int c1 = 0; c1 < 3; ++c1) {
          CHECK(std::abs(m(Eigen::Index(order[r1]), Eigen::Index(order[c1])) - ref(r1, c1)) <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("dimer parameters at resonance") {
    const JCParams p(1.0, 0.0, 0.01);
    const EffectiveDimerHamiltonian d = dimer_effective(p, 1e-4);
    CHECK(d.a - d.c == rel(-(2.0 - std::sqrt(2.0)) * 0.01, 1e-9));
    CHECK(d.detuning == rel(-5.858e-3, 1e-3));
    CHECK(d.b == rel(-0.85355e-4, 1e-4));
    CHECK(dimer_effective(p, 0.0).b == 0.0);
    const EffectiveDimerHamiltonian far = dimer_effective(JCParams::from_detuning_ratio(1.0, 0.01, 1e4), 1e-4);
    CHECK(std::abs(far.detuning) < 1e-9);
    CHECK(std::abs(std::abs(far.b) - std::sqrt(2.0) * 1e-4) < 1e-7);
  }

  TEST_CASE("zero hopping gives the polariton energies") {
    const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, 2.0);
    const LowerBranchBasis b(3, 3);
    const SparseMatrix h = polariton_hamiltonian(LatticeGraph::chain(3), p, 0.0, b).matrix;
    CHECK(h.nonZeros() == static_cast<Eigen::Index>(b.dimension()));
    for (std::size_t k = 0; k < b.dimension(); ++k) {
      double e = 0.0;
      for (int n : b.tuples()[k]) e += polariton_energy(n, Branch::Lower, p);
      CHECK(h.coeff(Eigen::Index(k), Eigen::Index(k)).real() == Approx(e));
    }
  }

  TEST_CASE("trimer spectrum against the full model") {
    const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, 50.0);
    const double J = 1e-4;
    const LowerBranchBasis eb(3, 3);
    const EffectiveHamiltonian eff = polariton_hamiltonian(LatticeGraph::chain(3), p, J, eb);
    CHECK(is_hermitian(eff.matrix));
    const DenseMatrix ed(eff.matrix);
    const Eigen::VectorXd e_eff = Eigen::SelfAdjointEigenSolver<DenseMatrix>(ed, Eigen::EigenvaluesOnly).eigenvalues();

    const ProductBasis fb(3, {5, false});
    const Subspace sector = Subspace::excitation_sector(fb, 3);
    const DenseMatrix fd(sector.restrict(jch_hamiltonian(LatticeGraph::chain(3), p, J, fb)));
    const Eigen::VectorXd e_full = Eigen::SelfAdjointEigenSolver<DenseMatrix>(fd, Eigen::EigenvaluesOnly).eigenvalues();
    // the ten lowest full levels are the lower-branch manifold
    for (Eigen::Index k = 0; k < e_eff.size(); ++k) CHECK(std::abs(e_eff(k) - e_full(k)) <= 10.0 * J);
  }

  TEST_CASE("advisory tag") {
    const LowerBranchBasis b(2, 2);
    CHECK_FALSE(polariton_hamiltonian(LatticeGraph::chain(2), JCParams(1.0, 0.0, 0.01), 1e-4, b).advisory);
    CHECK(polariton_hamiltonian(LatticeGraph::chain(2), JCParams(1.0, 0.0, 0.01), 1e-2, b).advisory);
  }
}
