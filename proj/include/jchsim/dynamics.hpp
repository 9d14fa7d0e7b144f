#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jchsim/effective.hpp"
#include "jchsim/fockspace.hpp"
#include "jchsim/lattice.hpp"
#include "jchsim/polariton.hpp"
#include "jchsim/site_basis.hpp"
#include "jchsim/types.hpp"

namespace jch {

/// Sampled pure-state evolution; states are expressed in `basis`.
struct StateTrajectory {
  std::shared_ptr<const SiteLabeledBasis> basis;
  std::vector<double> times;
  std::vector<StateVector> states;
};

/// Sampled density-matrix evolution; matrices are expressed in `basis`.
struct DensityTrajectory {
  std::shared_ptr<const SiteLabeledBasis> basis;
  std::vector<double> times;
  std::vector<DenseMatrix> states;
};

/// Per-site dissipation rates (hbar = 1): TLS relaxation, TLS dephasing,
/// photon loss.
struct LindbladRates {
  double gamma = 0.0;
  double gamma_phi = 0.0;
  double kappa = 0.0;

  void validate() const;
  bool lossless() const noexcept { return gamma == 0.0 && gamma_phi == 0.0 && kappa == 0.0; }
};

/// Dissipator term rate * (L rho L^dag - {L^dag L, rho}/2).
struct CollapseOperator {
  double rate = 0.0;
  SparseMatrix op;
};

/// Time-dependent Hamiltonian term envelope(t) * op + h.c.
struct DriveTerm {
  SparseMatrix op;
  std::function<Complex(double)> envelope;
};

/// sigma_i^- (gamma), sigma_i^z (gamma_phi) and a_i (kappa) on every site;
/// zero rates are skipped.
std::vector<CollapseOperator> lattice_collapse_operators(const ProductBasis& basis,
                                                         const LindbladRates& rates);

struct ClosedEvolutionOptions {
  std::size_t dense_limit = 1024;  // exact eigendecomposition up to this dimension
  std::size_t krylov_dim = 30;
  double krylov_tol = 1e-10;       // local error per Krylov step
};

/// psi(t) = exp(-i H t) psi0 at each time of an ascending grid starting at
/// t >= 0 (psi0 is the state at t = 0). Throws std::invalid_argument for a
/// non-Hermitian H or a malformed grid.
std::vector<StateVector> evolve_closed(const SparseMatrix& hamiltonian, const StateVector& psi0,
                                       std::span<const double> times,
                                       const ClosedEvolutionOptions& options = {});

struct LindbladOptions {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::size_t max_steps = 5'000'000;
};

/// Raised when the adaptive integrator cannot make progress.
class LindbladStepError : public std::runtime_error {
 public:
  LindbladStepError(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time) {}
  double last_good_time() const noexcept { return last_good_time_; }

 private:
  double last_good_time_;
};

/// Integrates d rho/dt = -i[H(t), rho] + sum_k rate_k D[L_k] rho with an
/// adaptive Dormand-Prince 5(4) scheme and returns rho at every grid time.
/// rho0 is the state at times.front().
std::vector<DenseMatrix> evolve_lindblad(const SparseMatrix& hamiltonian,
                                         std::span<const CollapseOperator> collapse,
                                         const DenseMatrix& rho0, std::span<const double> times,
                                         const LindbladOptions& options = {},
                                         std::span<const DriveTerm> drives = {});

/// Throws std::invalid_argument unless rho is Hermitian (1e-10), has unit
/// trace (1e-8) and no eigenvalue below -1e-8.
void validate_density_matrix(const DenseMatrix& rho);

/// Product of single-site lower polaritons |1,-> = gamma_1- |down,1> + rho_1- |up,0>
/// (ancillas, if any, in |down>).
StateVector mott_initial_state(const ProductBasis& basis, const JCParams& p);

/// |1,-><1,-| for one site without ancilla (dimension 2 n_max).
DenseMatrix lower_polariton_projector(const JCParams& p, int n_max);

/// rho (x) rho (x) ... (L factors), site 0 slowest.
DenseMatrix tensor_power(const DenseMatrix& site_rho, std::size_t sites);

enum class Representation { FullFock, Effective };

struct QuenchConfig {
  LatticeGraph lattice = LatticeGraph::chain(2);
  JCParams params{1.0, 0.0, 1e-2};
  double hopping = 1e-4;  // J after the quench
  std::optional<double> t_end;  // defaults to tau = 1/J
  std::size_t n_time_samples = 2000;
  bool auto_samples = true;  // raise the count to >= 20 samples per period of Omega0
  Representation representation = Representation::FullFock;
  int n_max = 5;
  double truncation_warning = 1e-4;
};

/// t_end if set, otherwise 1/J. Throws when J = 0 and no t_end is given.
double averaging_window(const QuenchConfig& cfg);

/// Uniform grid on [0, window] with the configured density.
std::vector<double> sample_times(const QuenchConfig& cfg);

struct ClosedQuenchResult {
  StateTrajectory trajectory;
  double tau = 0.0;
  RwaReport rwa;
  bool effective_advisory = false;
  std::vector<std::string> warnings;
};

/// Sudden quench J: 0 -> J_f from the Mott state, propagated in the
/// representation's N = L sector. States are kept in the frame rotating
/// at omega per excitation, which leaves every N-conserving observable
/// unchanged.
ClosedQuenchResult quench(const QuenchConfig& cfg);

struct OpenQuenchConfig {
  QuenchConfig quench;
  LindbladRates rates;
  LindbladOptions integrator;
};

struct OpenQuenchResult {
  DensityTrajectory trajectory;
  double tau = 0.0;
  double discarded_weight = 0.0;  // initial weight above the propagated excitation cap
  std::vector<std::string> warnings;
};

/// Lindblad quench of the lattice starting from site_state^(x)L (ideal
/// |1,-><1,-| when site_state is empty). Only the full Fock representation
/// is supported.
OpenQuenchResult quench_open(const OpenQuenchConfig& cfg, const DenseMatrix& site_state = {});

}  // namespace jch
