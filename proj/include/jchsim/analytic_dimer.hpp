#pragma once

#include <Eigen/Dense>

#include "jchsim/effective.hpp"
#include "jchsim/types.hpp"

namespace jch {

/// Spectral data of the 3x3 dimer Hamiltonian.
///   lambda_pm = (a + c +- Omega0)/2,  alpha_pm = (a - c +- Omega0)/(2b)
///   Omega0 = sqrt(8b^2 + (a-c)^2), Omega1 = sqrt(7b^2 + 2(a-c)^2),
///   Omega2 = sqrt(2b^2 + (a-c)^2).
/// alpha_pm are NaN when b = 0.
struct DimerSpectralData {
  double lambda_plus = 0.0;
  double lambda_minus = 0.0;
  double alpha_plus = 0.0;
  double alpha_minus = 0.0;
  double omega0 = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;
};

DimerSpectralData spectral_data(const EffectiveDimerHamiltonian& h);

/// Amplitudes of |psi0> (c0) and of each |psi2^-> (c2) at time t after the
/// quench, starting from |psi0>. For b = 0 the state stays frozen (up to
/// its phase).
struct DimerAmplitudes {
  Complex c0;
  Complex c2;
};

DimerAmplitudes amplitudes(double t, const EffectiveDimerHamiltonian& h);

/// Time average of Var(n_i) over tau = 1/J:
/// (4b^2/Omega0^2) [1 - (J/Omega0) sin(Omega0/J)].
double variance_time_avg(const EffectiveDimerHamiltonian& h, double hopping);

/// Time average of the linear entropy over tau = 1/J:
/// (2b^2/Omega0^5) [2 Omega0 Omega1^2 - 4 J Omega2^2 sin(Omega0/J) - 3 b^2 J sin(2 Omega0/J)].
double entropy_time_avg(const EffectiveDimerHamiltonian& h, double hopping);

/// Single-site reduced density matrix in the local basis {|0,->, |1,->, |2,->}:
/// diag(|c2|^2, |c0|^2, |c2|^2).
Eigen::Matrix3d reduced_density_matrix(double t, const EffectiveDimerHamiltonian& h);

/// 1 - (|c0|^4 + 2 |c2|^4).
double linear_entropy(double t, const EffectiveDimerHamiltonian& h);

}  // namespace jch
