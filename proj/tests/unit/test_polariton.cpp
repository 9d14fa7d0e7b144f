#include "doctest.h"

#include "approx.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "jchsim/polariton.hpp"

using namespace jch;
using doctest::Approx;

namespace {

// Bare single-site space, index photons * 2 + tls, built independently of the library.
constexpr int kLevels = 8;

Eigen::MatrixXd bare_jc(const JCParams& p) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * kLevels, 2 * kLevels);
  for (int n = 0; n < kLevels; ++n) {
    h(2 * n, 2 * n) = p.omega() * n;
    h(2 * n + 1, 2 * n + 1) = p.omega() * n + p.omega0();
    if (n >= 1) {  // g (s+ a + s- a^dag) couples |down, n> and |up, n-1>
      h(2 * n, 2 * (n - 1) + 1) = p.g() * std::sqrt(double(n));
      h(2 * (n - 1) + 1, 2 * n) = p.g() * std::sqrt(double(n));
    }
  }
  return h;
}

Eigen::MatrixXd bare_annihilation() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * kLevels, 2 * kLevels);
  for (int n = 1; n < kLevels; ++n) {
    for (int s = 0; s < 2; ++s) a(2 * (n - 1) + s, 2 * n + s) = std::sqrt(double(n));
  }
  return a;
}

// Dressed state |n, branch> from diagonalizing the 2x2 block; sign fixed so
// the |down, n> part of |n,-> and the |up, n-1> part of |n,+> are positive.
Eigen::VectorXd dressed(int n, Branch b, const JCParams& p) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * kLevels);
  if (n == 0) {
    v(0) = 1.0;
    return v;
  }
  Eigen::Matrix2d block;
  const double c = p.g() * std::sqrt(double(n));
  block << p.omega() * n, c, c, p.omega() * n + p.delta();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(block);
  Eigen::Vector2d e = eig.eigenvectors().col(b == Branch::Lower ? 0 : 1);
  if ((b == Branch::Lower ? e(0) : e(1)) < 0.0) e = -e;
  v(2 * n) = e(0);
  v(2 * (n - 1) + 1) = e(1);
  return v;
}

}  // namespace

TEST_SUITE("polariton") {
  TEST_CASE("chi") {
    CHECK(chi(1, JCParams(1.0, 0.0, 1.0)) == Approx(1.0));
    CHECK(chi(2, JCParams(1.0, 0.0, 1.0)) == Approx(std::sqrt(2.0)));
    CHECK(chi(1, JCParams(1.0, 2.0, 1.0)) == Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(chi(0, JCParams(1.0, 0.0, 1.0)), std::invalid_argument);
  }

  TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(JCParams(0.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(JCParams(1.0, 0.0, 0.0), std::invalid_argument);
    const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, 5.0);
    CHECK(p.delta() == Approx(0.05));
    CHECK(p.omega0() - p.omega() == rel(p.delta(), 1e-12));
  }

  TEST_CASE("energies at resonance") {
    const JCParams p(1.0, 0.0, 0.01);
    CHECK(polariton_energy(1, Branch::Upper, p) == Approx(1.01));
    CHECK(polariton_energy(1, Branch::Lower, p) == Approx(0.99));
    CHECK(polariton_energy(2, Branch::Lower, p) == Approx(2.0 - std::sqrt(2.0) * 0.01));
    CHECK(polariton_energy(0, Branch::Lower, p) == 0.0);
    CHECK_THROWS_AS(polariton_energy(0, Branch::Upper, p), std::invalid_argument);
  }

  TEST_CASE("dispersive energies") {
    const double g = 0.01;
    const JCParams p = JCParams::from_detuning_ratio(1.0, g, 100.0);
    const double delta = 100.0 * g;
    for (int n = 1; n <= 3; ++n) {
      const double shift = polariton_energy(n, Branch::Lower, p) - n * 1.0;
      // -g^2 n / delta to first order, next term is relative (g/delta)^2 n
      CHECK(shift == rel(-g * g * n / delta, 1e-3 * n));
    }
  }

  TEST_CASE("energy ordering") {
    for (double r : {-5.0, 0.0, 0.3, 2.0, 50.0}) {
      const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, r);
      for (int n = 1; n <= 5; ++n) {
        CHECK(polariton_energy(n, Branch::Upper, p) - polariton_energy(n, Branch::Lower, p) ==
              rel(2.0 * chi(n, p), 1e-9));
      }
    }
  }

  TEST_CASE("mixing angle") {
    CHECK(mixing_angle(3, JCParams(1.0, 0.0, 0.01)) == M_PI / 2);
    CHECK(mixing_angle(1, JCParams(1.0, 2.0, 1.0)) == Approx(M_PI / 4));
    CHECK(mixing_angle(1, JCParams::from_detuning_ratio(1.0, 0.01, 1e6)) < 1e-5);
    const double neg = mixing_angle(1, JCParams(1.0, -0.02, 0.01));
    CHECK(neg > M_PI / 2);
    CHECK(neg < M_PI);
  }

  TEST_CASE("coefficients") {
    const PolaritonCoeffs c0 = coefficients(0, JCParams(1.0, 0.0, 0.01));
    CHECK(c0.gamma_minus == 1.0);
    CHECK(c0.gamma_plus == 0.0);
    CHECK(c0.rho_plus == 0.0);
    CHECK(c0.rho_minus == 0.0);
    const PolaritonCoeffs c1 = coefficients(1, JCParams(1.0, 0.0, 0.01));
    CHECK(c1.gamma_minus == Approx(std::cos(M_PI / 4)));
    CHECK(c1.rho_plus == Approx(std::cos(M_PI / 4)));
    CHECK(c1.rho_minus == Approx(-std::sin(M_PI / 4)));
  }

  TEST_CASE("normalization and orthogonality") {
    for (double r = 1e-3; r <= 1e4; r *= 3.7) {
      const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, r);
      for (int n = 1; n <= 6; ++n) {
        const PolaritonCoeffs c = coefficients(n, p);
        CHECK(std::abs(c.gamma_plus * c.gamma_plus + c.rho_plus * c.rho_plus - 1.0) <= 1e-12);
        CHECK(std::abs(c.gamma_minus * c.gamma_minus + c.rho_minus * c.rho_minus - 1.0) <= 1e-12);
        CHECK(std::abs(c.gamma_plus * c.gamma_minus + c.rho_plus * c.rho_minus) <= 1e-12);
      }
    }
  }

  TEST_CASE("dressed states are eigenvectors of the bare model") {
    for (double r : {0.0, 0.7, 2.43, 10.0, -3.0}) {
      const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, r);
      const Eigen::MatrixXd h = bare_jc(p);
      for (int n = 1; n < kLevels; ++n) {
        for (Branch b : {Branch::Lower, Branch::Upper}) {
          const PolaritonCoeffs c = coefficients(n, p);
          Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * kLevels);
          v(2 * n) = c.gamma(b);
          v(2 * (n - 1) + 1) = c.rho(b);
          const Eigen::VectorXd residual = h * v - polariton_energy(n, b, p) * v;
          CHECK(residual.norm() <= 1e-12 * n);
          CHECK((v - dressed(n, b, p)).norm() <= 1e-12);
        }
      }
    }
  }

  TEST_CASE("hopping element against brute force") {
    const Eigen::MatrixXd a = bare_annihilation();
    for (double r : {0.0, 0.5, 1.82, 2.43, 2.73, 10.0, 100.0, -1.0}) {
      const JCParams p = JCParams::from_detuning_ratio(1.0, 0.01, r);
      for (int n = 1; n < kLevels; ++n) {
        for (Branch al : {Branch::Lower, Branch::Upper}) {
          for (Branch ap : {Branch::Lower, Branch::Upper}) {
            if (n == 1 && al == Branch::Upper) continue;  // |0,+> does not exist
            const double oracle = dressed(n - 1, al, p).dot(a * dressed(n, ap, p));
            CHECK(std::abs(hopping_element(n, al, ap, p) - oracle) <= 1e-12);
          }
        }
      }
    }
  }

  TEST_CASE("hopping products") {
    const JCParams res(1.0, 0.0, 0.01);
    CHECK(hopping_element(1, Branch::Lower, Branch::Lower, res) == Approx(std::cos(M_PI / 4)));
    const double prod = hopping_element(1, Branch::Lower, Branch::Lower, res) *
                        hopping_element(2, Branch::Lower, Branch::Lower, res);
    CHECK(prod == rel(0.85355, 1e-5));
    const JCParams far = JCParams::from_detuning_ratio(1.0, 0.01, 1e4);
    const double far_prod = hopping_element(1, Branch::Lower, Branch::Lower, far) *
                            hopping_element(2, Branch::Lower, Branch::Lower, far);
    CHECK(std::abs(far_prod - std::sqrt(2.0)) < 1e-3);
  }

  TEST_CASE("rwa report") {
    const RwaReport r = rwa_report(JCParams(1.0, 0.0, 0.01), 1e-4, 3);
    CHECK(r.lower_branch_gap == rel((2.0 - std::sqrt(2.0)) * 0.01 / 1e-4, 1e-9));
    CHECK(r.lower_branch_gap == Approx(58.58).epsilon(1e-3));
    CHECK(r.passes());
    CHECK_FALSE(r.near_resonance);

    const RwaReport near = rwa_report(JCParams::from_detuning_ratio(1.0, 0.01, 50.0), 1e-4, 3);
    CHECK(near.near_resonance);
    CHECK(near.lower_branch_gap < 1.0);

    const RwaReport idle = rwa_report(JCParams(1.0, 0.0, 0.01), 0.0, 3);
    CHECK(idle.passes());
    for (const auto& c : idle.gaps) CHECK(std::isinf(c.ratio));
    CHECK(idle.flagged().empty());

    const RwaReport strong = rwa_report(JCParams(1.0, 0.0, 0.01), 0.01, 3);
    CHECK_FALSE(strong.passes());
    CHECK_FALSE(strong.flagged().empty());
  }
}
