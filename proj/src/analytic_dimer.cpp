#include "jchsim/analytic_dimer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace jch {

DimerSpectralData spectral_data(const EffectiveDimerHamiltonian& h) {
  const double d = h.detuning;
  const double b2 = h.b * h.b;
  DimerSpectralData s;
  s.omega0 = std::sqrt(8.0 * b2 + d * d);
  s.omega1 = std::sqrt(7.0 * b2 + 2.0 * d * d);
  s.omega2 = std::sqrt(2.0 * b2 + d * d);
  s.lambda_plus = 0.5 * (h.a + h.c + s.omega0);
  s.lambda_minus = 0.5 * (h.a + h.c - s.omega0);
  if (h.b == 0.0) {
    s.alpha_plus = s.alpha_minus = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  // alpha_+ alpha_- = -2; take the root without cancellation first.
  if (d >= 0.0) {
    s.alpha_plus = (d + s.omega0) / (2.0 * h.b);
    s.alpha_minus = -2.0 / s.alpha_plus;
  } else {
    s.alpha_minus = (d - s.omega0) / (2.0 * h.b);
    s.alpha_plus = -2.0 / s.alpha_minus;
  }
  return s;
}

DimerAmplitudes amplitudes(double t, const EffectiveDimerHamiltonian& h) {
  if (h.b == 0.0) return {std::exp(-kImag * h.a * t), Complex{0.0, 0.0}};
  const DimerSpectralData s = spectral_data(h);
  const Complex ep = std::exp(-kImag * s.lambda_plus * t);
  const Complex em = std::exp(-kImag * s.lambda_minus * t);
  const double norm = s.alpha_plus - s.alpha_minus;
  return {(s.alpha_plus * ep - s.alpha_minus * em) / norm, (ep - em) / norm};
}

double variance_time_avg(const EffectiveDimerHamiltonian& h, double hopping) {
  if (!(hopping > 0.0)) throw std::invalid_argument("time average over tau = 1/J needs J > 0");
  const DimerSpectralData s = spectral_data(h);
  if (h.b == 0.0 || s.omega0 == 0.0) return 0.0;
  const double x = s.omega0 / hopping;
  return 4.0 * h.b * h.b / (s.omega0 * s.omega0) * (1.0 - std::sin(x) / x);
}

double entropy_time_avg(const EffectiveDimerHamiltonian& h, double hopping) {
  if (!(hopping > 0.0)) throw std::invalid_argument("time average over tau = 1/J needs J > 0");
  const DimerSpectralData s = spectral_data(h);
  if (h.b == 0.0 || s.omega0 == 0.0) return 0.0;
  const double b2 = h.b * h.b;
  const double x = s.omega0 / hopping;
  const double bracket = 2.0 * s.omega0 * s.omega1 * s.omega1 -
                         4.0 * hopping * s.omega2 * s.omega2 * std::sin(x) -
                         3.0 * b2 * hopping * std::sin(2.0 * x);
  return 2.0 * b2 / std::pow(s.omega0, 5) * bracket;
}

Eigen::Matrix3d reduced_density_matrix(double t, const EffectiveDimerHamiltonian& h) {
  const DimerAmplitudes c = amplitudes(t, h);
  const double p2 = std::norm(c.c2);
  return Eigen::Vector3d(p2, std::norm(c.c0), p2).asDiagonal();
}

double linear_entropy(double t, const EffectiveDimerHamiltonian& h) {
  const DimerAmplitudes c = amplitudes(t, h);
  const double p0 = std::norm(c.c0);
  const double p2 = std::norm(c.c2);
  return 1.0 - (p0 * p0 + 2.0 * p2 * p2);
}

}  // namespace jch
