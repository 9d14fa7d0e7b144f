#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jchsim/dynamics.hpp"
#include "jchsim/polariton.hpp"
#include "jchsim/types.hpp"

namespace jch {

/// Gaussian pi pulse and Stark-step timing. While the pulse is applied the
/// ancilla sits at E1^- - park_factor * g_A; sigma = sigma_factor / park
/// detuning and the envelope is cut at +-truncation * sigma.
struct PulseSpec {
  double park_factor = 50.0;
  double sigma_factor = 5.0;
  double truncation = 4.0;
  std::optional<double> swap_time;  // default pi / (2 g_A t1--)
};

struct InitializationConfig {
  JCParams params{5000.0, 500.0, 200.0};
  double g_ancilla = 50.0;
  LindbladRates site_rates;     // act on the lattice site during preparation
  LindbladRates ancilla_rates;  // gamma and gamma_phi of the ancilla; kappa unused
  PulseSpec pulse;
  int n_max = 4;
  double fidelity_floor = 0.90;
  double leakage_warning = 1e-2;
  LindbladOptions integrator{1e-10, 1e-12, 5'000'000};
};

struct InitializationResult {
  DenseMatrix site_state;     // ancilla traced out, dimension 2 n_max
  DenseMatrix with_ancilla;   // before the trace, dimension 4 n_max
  double fidelity = 0.0;      // <1,-; down_A| rho |1,-; down_A>
  double leakage = 0.0;       // population of |1,+> on the site
  double excited_ancilla = 0.0;  // population left in up_A after the pulse
  double pulse_fidelity = 0.0;   // <0,-; up_A| rho |0,-; up_A> after the pulse
  double swap_time = 0.0;
  double pulse_duration = 0.0;
  std::vector<std::string> warnings;
};

/// Ground state -> Gaussian pi pulse on the ancilla -> ancilla Stark-tuned to
/// E1^- for the swap time -> ancilla detuned again and traced out. One site
/// plus ancilla, sites uncoupled. Fidelity below the floor is reported as a
/// warning, not an error.
InitializationResult initialize_with_ancilla(const InitializationConfig& cfg);

}  // namespace jch
