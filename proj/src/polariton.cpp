#include "jchsim/polariton.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jch {

JCParams::JCParams(double omega, double delta, double g) : omega_(omega), delta_(delta), g_(g) {
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw std::invalid_argument("resonator frequency omega must be positive");
  }
  if (!(g > 0.0) || !std::isfinite(g)) {
    throw std::invalid_argument("light-matter coupling g must be positive");
  }
  if (!std::isfinite(delta)) throw std::invalid_argument("detuning must be finite");
}

double chi(int n, const JCParams& p) {
  if (n < 1) throw std::invalid_argument("chi(n) requires n >= 1");
  const double half = 0.5 * p.delta();
  return std::sqrt(half * half + p.g() * p.g() * n);
}

namespace {

// E_n^alpha - n omega, without the delta/2 -+ chi cancellation.
double energy_offset(int n, Branch branch, const JCParams& p) {
  const double half = 0.5 * p.delta();
  const double c = chi(n, p);
  const double coupling = p.g() * p.g() * n;
  if (branch == Branch::Lower) {
    return half >= 0.0 ? -coupling / (half + c) : half - c;
  }
  return half <= 0.0 ? coupling / (c - half) : half + c;
}

}  // namespace

double polariton_energy(int n, Branch branch, const JCParams& p) {
  if (n < 0) throw std::invalid_argument("excitation number must be non-negative");
  if (n == 0) {
    if (branch == Branch::Upper) {
      throw std::invalid_argument("|0,+> is unphysical and has no energy");
    }
    return 0.0;
  }
  return n * p.omega() + energy_offset(n, branch, p);
}

double mixing_angle(int n, const JCParams& p) {
  if (n < 1) throw std::invalid_argument("mixing angle requires n >= 1");
  return std::atan2(2.0 * p.g() * std::sqrt(static_cast<double>(n)), p.delta());
}

PolaritonCoeffs coefficients(int n, const JCParams& p) {
  if (n < 0) throw std::invalid_argument("excitation number must be non-negative");
  PolaritonCoeffs c;
  c.n = n;
  if (n == 0) return c;
  const double half_theta = 0.5 * mixing_angle(n, p);
  c.rho_plus = std::cos(half_theta);
  c.gamma_plus = std::sin(half_theta);
  c.rho_minus = -c.gamma_plus;
  c.gamma_minus = c.rho_plus;
  return c;
}

double hopping_element(int n, Branch alpha, Branch alpha_prime, const JCParams& p) {
  if (n < 1) throw std::invalid_argument("hopping element requires n >= 1");
  const PolaritonCoeffs lo = coefficients(n - 1, p);
  const PolaritonCoeffs hi = coefficients(n, p);
  return std::sqrt(static_cast<double>(n)) * lo.gamma(alpha) * hi.gamma(alpha_prime) +
         std::sqrt(static_cast<double>(n - 1)) * lo.rho(alpha) * hi.rho(alpha_prime);
}

bool RwaReport::passes() const {
  for (const auto& c : gaps) {
    if (!c.ok) return false;
  }
  for (const auto& c : hierarchy) {
    if (!c.ok) return false;
  }
  return true;
}

std::vector<std::string> RwaReport::flagged() const {
  std::vector<std::string> out;
  for (const auto* list : {&gaps, &hierarchy}) {
    for (const auto& c : *list) {
      if (!c.ok) out.push_back(c.name);
    }
  }
  return out;
}

RwaReport rwa_report(const JCParams& p, double hopping, int n_max, double threshold) {
  if (n_max < 2) throw std::invalid_argument("rwa_report needs n_max >= 2");
  if (hopping < 0.0) throw std::invalid_argument("hopping must be non-negative");

  constexpr double inf = std::numeric_limits<double>::infinity();
  auto scaled = [&](double gap) { return hopping == 0.0 ? inf : std::abs(gap) / hopping; };
  auto e = [&](int n, Branch b) { return energy_offset(n, b, p); };
  constexpr Branch lo = Branch::Lower;
  constexpr Branch up = Branch::Upper;

  RwaReport r;
  r.threshold = threshold;
  // Offsets relative to n omega: every listed gap conserves excitation
  // number, so the n omega parts cancel exactly.
  const std::pair<const char*, double> gaps[] = {
      {"|E2+ - 2E1-|", e(2, up) - 2.0 * e(1, lo)},
      {"|2E1+ - E2-|", 2.0 * e(1, up) - e(2, lo)},
      {"|E1+ + E1- - E2-|", e(1, up) + e(1, lo) - e(2, lo)},
      {"|E1+ - E1-|", e(1, up) - e(1, lo)},
      {"|E3+ - E2- - E1-|", e(3, up) - e(2, lo) - e(1, lo)},
      {"|E2+ - E2-|", e(2, up) - e(2, lo)},
      {"|E2+ + E1+ - E2- - E1-|", e(2, up) + e(1, up) - e(2, lo) - e(1, lo)},
  };
  for (const auto& [name, gap] : gaps) {
    const double ratio = scaled(gap);
    r.gaps.push_back({name, ratio, ratio >= threshold});
  }
  for (int n = 1; n <= n_max; ++n) {
    const double root_n = std::sqrt(static_cast<double>(n));
    const double hop_ratio = hopping == 0.0 ? inf : p.g() * root_n / (hopping * n);
    const double rwa_ratio = p.omega() * n / (p.g() * root_n);
    r.hierarchy.push_back({"g sqrt(n)/(J n), n=" + std::to_string(n), hop_ratio, hop_ratio >= threshold});
    r.hierarchy.push_back({"omega n/(g sqrt(n)), n=" + std::to_string(n), rwa_ratio, rwa_ratio >= threshold});
  }
  r.lower_branch_gap = scaled(e(2, lo) - 2.0 * e(1, lo));
  r.near_resonance = r.lower_branch_gap < threshold;
  return r;
}

}  // namespace jch
