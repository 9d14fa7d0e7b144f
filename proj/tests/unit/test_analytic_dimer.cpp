#include "doctest.h"

#include "approx.hpp"

#include <cmath>
#include <stdexcept>
#include <random>

#include <Eigen/Eigenvalues>

#include "jchsim/analytic_dimer.hpp"

using namespace jch;
using doctest::Approx;

namespace {

// exp(-i M t) e0 by diagonalizing the 3x3 matrix directly.
Eigen::Vector3cd propagate(const Eigen::Matrix3d& m, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(m);
  Eigen::Vector3cd c = eig.eigenvectors().row(0).transpose().cast<Complex>();
  for (int k = 0; k < 3; ++k) c(k) *= std::exp(-kImag * eig.eigenvalues()(k) * t);
  return eig.eigenvectors().cast<Complex>() * c;
}

// Trapezoid average of f over [0, 1/J] with n intervals.
template <class F>
double quadrature(F f, double hopping, int n) {
  const double tau = 1.0 / hopping;
  double acc = 0.5 * (f(0.0) + f(tau));
  for (int k = 1; k < n; ++k) acc += f(tau * k / n);
  return acc / n;
}

}  // namespace

TEST_SUITE("analytic_dimer") {
  TEST_CASE("initial amplitudes") {
    const EffectiveDimerHamiltonian h = dimer_effective(JCParams(1.0, 0.0, 0.01), 1e-4);
    const DimerAmplitudes c = amplitudes(0.0, h);
    CHECK(std::abs(c.c0 - 1.0) < 1e-14);
    CHECK(std::abs(c.c2) < 1e-14);
    const Eigen::Matrix3d rho = reduced_density_matrix(0.0, h);
    CHECK(rho(1, 1) == Approx(1.0));
    CHECK(rho(0, 0) == Approx(0.0));
  }

  TEST_CASE("oracle equivalence with direct propagation") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> ratio(-1.0, 3.0), coupling(0.005, 0.02), hop(0.005, 0.02), unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      const double g = coupling(rng);
      const JCParams p = JCParams::from_detuning_ratio(1.0, g, std::pow(10.0, ratio(rng)));
      const double J = hop(rng) * g;
      const EffectiveDimerHamiltonian h = dimer_effective(p, J);
      // subtract 2 omega so the phases stay moderate over tau
      Eigen::Matrix3d m = h.matrix();
      m.diagonal().array() -= 2.0;
      for (int s = 0; s < 100; ++s) {
        const double t = unit(rng) / J;
        const Eigen::Vector3cd ref = propagate(m, t) * std::exp(-kImag * 2.0 * t);
        const DimerAmplitudes c = amplitudes(t, h);
        CHECK(std::abs(c.c0 - ref(0)) <= 1e-9);
        CHECK(std::abs(c.c2 - ref(1)) <= 1e-9);
        CHECK(std::abs(c.c2 - ref(2)) <= 1e-9);
        CHECK(std::norm(c.c0) + 2.0 * std::norm(c.c2) == Approx(1.0).epsilon(1e-12));
        CHECK(reduced_density_matrix(t, h).trace() == Approx(1.0).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("resonant limit oscillation") {
    EffectiveDimerHamiltonian h;
    h.a = h.c = 2.0;
    h.b = -0.3;
    h.detuning = 0.0;
    for (double t : {0.1, 1.0, 3.7}) {
      const double expected = 0.5 * std::pow(std::sin(std::sqrt(2.0) * h.b * t), 2);
      CHECK(std::norm(amplitudes(t, h).c2) == rel(expected, 1e-12));
    }
  }

  TEST_CASE("asymptotic values") {
    const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, 1e3);
    const EffectiveDimerHamiltonian h = dimer_effective(p, 1e-4);
    CHECK(std::abs(variance_time_avg(h, 1e-4) - 0.5946) < 0.005);
    CHECK(std::abs(entropy_time_avg(h, 1e-4) - 0.4616) < 0.005);
    CHECK(0.5 * (1.0 - 0.25 * std::sin(4.0)) == Approx(0.5946).epsilon(1e-4));
  }

  TEST_CASE("frozen state") {
    const EffectiveDimerHamiltonian h = dimer_effective(JCParams(1.0, 0.0, 0.01), 0.0);
    CHECK(variance_time_avg(h, 1e-4) == 0.0);
    CHECK(entropy_time_avg(h, 1e-4) == 0.0);
    CHECK(std::norm(amplitudes(123.0, h).c0) == Approx(1.0));
    CHECK(linear_entropy(50.0, h) == Approx(0.0));
    CHECK_THROWS_AS(variance_time_avg(h, 0.0), std::invalid_argument);
  }

  TEST_CASE("closed forms against quadrature") {
    for (double r : {0.0, 0.3, 1.0, 2.43, 5.0, 50.0, 1e3}) {
      const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, r);
      const double J = 1e-4;
      const EffectiveDimerHamiltonian h = dimer_effective(p, J);
      // occupations of site i: 1 in psi0, 2 and 0 in the two psi2 states
      const double var_direct = quadrature([&](double t) {
        const DimerAmplitudes c = amplitudes(t, h);
        const double p0 = std::norm(c.c0), p2 = std::norm(c.c2);
        const double n1 = p0 + 2.0 * p2;
        const double n2 = p0 + 4.0 * p2;
        return n2 - n1 * n1;
      }, J, 20000);
      CHECK(variance_time_avg(h, J) == rel(var_direct, 1e-6));
      const double ent_q = quadrature([&](double t) { return linear_entropy(t, h); }, J, 20000);
      CHECK(entropy_time_avg(h, J) == rel(ent_q, 1e-6));
    }
  }

  TEST_CASE("resonant detuning value") {
    const EffectiveDimerHamiltonian h = dimer_effective(JCParams(1.0, 0.0, 0.01), 1e-4);
    const double var = variance_time_avg(h, 1e-4);
    CHECK(var == rel(8.5e-4, 0.02));
    // frozen by independent evaluation (quadrature test above)
    CHECK(var == rel(8.351955638921e-4, 1e-9));
    CHECK(entropy_time_avg(h, 1e-4) > 0.0);
    CHECK(entropy_time_avg(h, 1e-4) < 2.0 * var);
  }
}
