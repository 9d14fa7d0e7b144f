#pragma once

#include <string>
#include <vector>

namespace jch {

enum class Branch { Lower, Upper };

/// Single-site Jaynes-Cummings parameters (hbar = 1). The detuning
/// delta = omega0 - omega is stored; omega0 is derived from it.
class JCParams {
 public:
  /// Throws std::invalid_argument unless omega > 0 and g > 0.
  JCParams(double omega, double delta, double g);

  static JCParams from_detuning_ratio(double omega, double g, double delta_over_g) {
    return JCParams(omega, delta_over_g * g, g);
  }

  double omega() const noexcept { return omega_; }
  double omega0() const noexcept { return omega_ + delta_; }
  double delta() const noexcept { return delta_; }
  double g() const noexcept { return g_; }

 private:
  double omega_;
  double delta_;
  double g_;
};

/// Dressed-state coefficients of |n,+-> = gamma |down,n> + rho |up,n-1>.
/// For n = 0 only |0,-> = |down,0> exists; the + state is all zeros.
struct PolaritonCoeffs {
  int n = 0;
  double gamma_plus = 0.0;
  double gamma_minus = 1.0;
  double rho_plus = 0.0;
  double rho_minus = 0.0;

  double gamma(Branch b) const noexcept { return b == Branch::Upper ? gamma_plus : gamma_minus; }
  double rho(Branch b) const noexcept { return b == Branch::Upper ? rho_plus : rho_minus; }
};

/// sqrt(delta^2/4 + g^2 n). Requires n >= 1.
double chi(int n, const JCParams& p);

/// E_n^+- = n omega + delta/2 +- chi(n). E_0^- = 0; (0, Upper) is rejected.
/// Evaluated in a cancellation-free form so the dispersive limit keeps full
/// relative precision in E_n^- - n omega.
double polariton_energy(int n, Branch branch, const JCParams& p);

/// theta_n = atan2(2 g sqrt(n), delta), in (0, pi); pi/2 at resonance.
double mixing_angle(int n, const JCParams& p);

PolaritonCoeffs coefficients(int n, const JCParams& p);

/// t_n^{alpha alpha'} = <n-1, alpha| a |n, alpha'>.
double hopping_element(int n, Branch alpha, Branch alpha_prime, const JCParams& p);

struct RwaCheck {
  std::string name;
  double ratio = 0.0;  // larger is safer; +inf when J = 0
  bool ok = true;
};

/// Validity of the lower-branch (rotating-wave) description.
///
/// `gaps` holds |gap|/J for every polariton-interchange process of the
/// dimer and trimer; `hierarchy` holds g sqrt(n)/(J n) and
/// omega n/(g sqrt(n)) for n = 1..n_max. Both must exceed `threshold`.
/// The lower-branch exchange detuning |E2^- - 2E1^-|/J is reported on its
/// own: a small value means strong dimer exchange (the resonance the
/// effective model describes), not a breakdown of the model.
struct RwaReport {
  double threshold = 10.0;
  std::vector<RwaCheck> gaps;
  std::vector<RwaCheck> hierarchy;
  double lower_branch_gap = 0.0;
  bool near_resonance = false;

  bool passes() const;
  std::vector<std::string> flagged() const;
};

RwaReport rwa_report(const JCParams& p, double hopping, int n_max, double threshold = 10.0);

}  // namespace jch
