#include "jchsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

#include "jchsim/analytic_dimer.hpp"
#include "krylov.hpp"

namespace jch {

void LindbladRates::validate() const {
  for (double r : {gamma, gamma_phi, kappa}) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw std::invalid_argument("dissipation rates must be finite and non-negative");
  }
}

std::vector<CollapseOperator> lattice_collapse_operators(const ProductBasis& basis,
                                                         const LindbladRates& rates) {
  rates.validate();
  std::vector<CollapseOperator> out;
  for (std::size_t i = 0; i < basis.num_sites(); ++i) {
    if (rates.gamma > 0.0) out.push_back({rates.gamma, site_operator(basis, SiteOperator::SigmaMinus, i)});
    if (rates.gamma_phi > 0.0) out.push_back({rates.gamma_phi, site_operator(basis, SiteOperator::SigmaZ, i)});
    if (rates.kappa > 0.0) out.push_back({rates.kappa, site_operator(basis, SiteOperator::Annihilate, i)});
  }
  return out;
}

namespace {

void check_grid(std::span<const double> times) {
  if (times.empty()) throw std::invalid_argument("empty time grid");
  if (!(times.front() >= 0.0)) throw std::invalid_argument("time grid must start at t >= 0");
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw std::invalid_argument("time grid must be strictly ascending");
  }
}

void check_square(const SparseMatrix& h, Eigen::Index dim, const char* what) {
  if (h.rows() != h.cols() || h.rows() != dim) {
    throw std::invalid_argument(std::string(what) + " has the wrong dimension");
  }
}

}  // namespace

std::vector<StateVector> evolve_closed(const SparseMatrix& hamiltonian, const StateVector& psi0,
                                       std::span<const double> times,
                                       const ClosedEvolutionOptions& options) {
  check_grid(times);
  check_square(hamiltonian, psi0.size(), "Hamiltonian");
  if (!is_hermitian(hamiltonian)) throw std::invalid_argument("Hamiltonian is not Hermitian");

  std::vector<StateVector> out;
  out.reserve(times.size());
  const auto dim = static_cast<std::size_t>(psi0.size());
  if (dim <= options.dense_limit) {
    const DenseMatrix dense_h(hamiltonian);
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(dense_h);
    const DenseMatrix& v = eig.eigenvectors();
    const Eigen::VectorXd& e = eig.eigenvalues();
    const StateVector c0 = v.adjoint() * psi0;
    for (double t : times) {
      StateVector c = c0;
      for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-kImag * e(k) * t);
      out.emplace_back(v * c);
    }
    return out;
  }

  detail::LanczosPropagator prop(hamiltonian, options.krylov_dim, options.krylov_tol);
  StateVector psi = psi0;
  double t_prev = 0.0;
  for (double t : times) {
    if (t > t_prev) psi = prop.advance(psi, t - t_prev);
    t_prev = t;
    out.push_back(psi);
  }
  return out;
}

void validate_density_matrix(const DenseMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("density matrix must be square and non-empty");
  const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-8) throw std::invalid_argument("density matrix trace differs from 1");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(rho, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-8) throw std::invalid_argument("density matrix is not positive semidefinite");
}

namespace {

using OdeState = std::vector<Complex>;

struct LindbladRhs {
  Eigen::Index dim;
  SparseMatrix h_eff;  // H - (i/2) sum r L^dag L
  std::vector<SparseMatrix> jumps;  // sqrt(r) L
  std::span<const DriveTerm> drives;

  void operator()(const OdeState& x, OdeState& dxdt, double t) const {
    Eigen::Map<const DenseMatrix> rho(x.data(), dim, dim);
    Eigen::Map<DenseMatrix> out(dxdt.data(), dim, dim);
    // rho is Hermitian, so rho A^dag = (A rho)^dag for every A used here.
    DenseMatrix m = h_eff * rho;
    for (const DriveTerm& d : drives) {
      const Complex f = d.envelope(t);
      if (f == Complex{}) continue;
      m += f * (d.op * rho) + std::conj(f) * (d.op.adjoint() * rho);
    }
    out = -kImag * (m - m.adjoint());
    for (const SparseMatrix& l : jumps) {
      const DenseMatrix lr = l * rho;
      out += l * lr.adjoint();
    }
  }
};

}  // namespace

std::vector<DenseMatrix> evolve_lindblad(const SparseMatrix& hamiltonian,
                                         std::span<const CollapseOperator> collapse,
                                         const DenseMatrix& rho0, std::span<const double> times,
                                         const LindbladOptions& options,
                                         std::span<const DriveTerm> drives) {
  check_grid(times);
  const Eigen::Index dim = rho0.rows();
  check_square(hamiltonian, dim, "Hamiltonian");
  validate_density_matrix(rho0);
  if (!is_hermitian(hamiltonian)) throw std::invalid_argument("Hamiltonian is not Hermitian");
  if (!(options.rel_tol > 0.0) || !(options.abs_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");

  LindbladRhs rhs;
  rhs.dim = dim;
  rhs.h_eff = hamiltonian;
  rhs.drives = drives;
  for (const CollapseOperator& c : collapse) {
    check_square(c.op, dim, "collapse operator");
    if (!(c.rate >= 0.0)) throw std::invalid_argument("collapse rates must be non-negative");
    if (c.rate == 0.0) continue;
    const SparseMatrix ldl = SparseMatrix(c.op.adjoint()) * c.op;
    rhs.h_eff -= (0.5 * c.rate) * kImag * ldl;
    rhs.jumps.emplace_back(std::sqrt(c.rate) * c.op);
  }
  for (const DriveTerm& d : drives) {
    check_square(d.op, dim, "drive operator");
    if (!d.envelope) throw std::invalid_argument("drive term without an envelope");
  }

  OdeState x(rho0.data(), rho0.data() + rho0.size());
  std::vector<DenseMatrix> out;
  out.reserve(times.size());
  double last_good = times.front();
  auto observer = [&](const OdeState& s, double t) {
    out.emplace_back(Eigen::Map<const DenseMatrix>(s.data(), dim, dim));
    last_good = t;
  };
  if (times.size() == 1) {
    observer(x, times.front());
    return out;
  }

  namespace ode = boost::numeric::odeint;
  double scale = 1.0;
  for (int k = 0; k < rhs.h_eff.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(rhs.h_eff, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
  }
  const double dt0 = std::min(1e-3 / scale, (times.back() - times.front()) * 1e-3);
  auto stepper = ode::make_dense_output(options.abs_tol, options.rel_tol, ode::runge_kutta_dopri5<OdeState>());
  try {
    ode::integrate_times(stepper, std::cref(rhs), x, times.begin(), times.end(), dt0, observer,
                         ode::max_step_checker(options.max_steps));
  } catch (const ode::odeint_error& e) {
    throw LindbladStepError(std::string("Lindblad integration failed: ") + e.what(), last_good);
  }
  for (const auto& rho : out) {
    if (!rho.allFinite()) throw LindbladStepError("Lindblad integration produced non-finite values", last_good);
  }
  return out;
}

StateVector mott_initial_state(const ProductBasis& basis, const JCParams& p) {
  const PolaritonCoeffs c = coefficients(1, p);
  const std::size_t L = basis.num_sites();
  // single-site |1,-> in the local basis
  const std::size_t down1 = basis.local_index({1, 0, 0});
  const std::size_t up0 = basis.local_index({0, 1, 0});
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
  for (std::size_t mask = 0; mask < (std::size_t{1} << L); ++mask) {
    std::size_t flat = 0;
    double amp = 1.0;
    for (std::size_t i = 0; i < L; ++i) {
      const bool up = (mask >> i) & 1U;
      flat += (up ? up0 : down1) * basis.stride(i);
      amp *= up ? c.rho_minus : c.gamma_minus;
    }
    psi(static_cast<Eigen::Index>(flat)) = amp;
  }
  return psi;
}

DenseMatrix lower_polariton_projector(const JCParams& p, int n_max) {
  const ProductBasis site(1, SiteSpace{n_max, false});
  const PolaritonCoeffs c = coefficients(1, p);
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(site.dimension()));
  v(static_cast<Eigen::Index>(site.local_index({1, 0, 0}))) = c.gamma_minus;
  v(static_cast<Eigen::Index>(site.local_index({0, 1, 0}))) = c.rho_minus;
  return v * v.adjoint();
}

DenseMatrix tensor_power(const DenseMatrix& site_rho, std::size_t sites) {
  if (sites == 0) throw std::invalid_argument("tensor power needs at least one factor");
  DenseMatrix out = site_rho;
  for (std::size_t k = 1; k < sites; ++k) {
    DenseMatrix next(out.rows() * site_rho.rows(), out.cols() * site_rho.cols());
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block(r * site_rho.rows(), c * site_rho.cols(), site_rho.rows(), site_rho.cols()) =
            out(r, c) * site_rho;
      }
    }
    out = std::move(next);
  }
  return out;
}

double averaging_window(const QuenchConfig& cfg) {
  if (cfg.t_end) {
    if (!(*cfg.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
    return *cfg.t_end;
  }
  if (!(cfg.hopping > 0.0)) throw std::invalid_argument("J = 0 needs an explicit t_end");
  return 1.0 / cfg.hopping;
}

std::vector<double> sample_times(const QuenchConfig& cfg) {
  const double window = averaging_window(cfg);
  if (cfg.n_time_samples < 2) throw std::invalid_argument("need at least 2 time samples");
  std::size_t n = cfg.n_time_samples;
  if (cfg.auto_samples) {
    const double omega0 = spectral_data(dimer_effective(cfg.params, cfg.hopping)).omega0;
    const double periods = omega0 * window / (2.0 * M_PI);
    n = std::max(n, static_cast<std::size_t>(std::ceil(20.0 * periods)) + 1);
  }
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) t[k] = window * static_cast<double>(k) / static_cast<double>(n - 1);
  t.back() = window;
  return t;
}

namespace {

std::string format_warning(const char* fmt, double value) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

// Largest population of the top Fock level on any site.
double top_level_population(const SiteLabeledBasis& basis, int n_max,
                            const std::function<double(std::size_t)>& weight) {
  double worst = 0.0;
  for (std::size_t site = 0; site < basis.num_sites(); ++site) {
    double pop = 0.0;
    for (std::size_t k = 0; k < basis.dimension(); ++k) {
      if (basis.photons(k, site) == n_max - 1) pop += weight(k);
    }
    worst = std::max(worst, pop);
  }
  return worst;
}

}  // namespace

ClosedQuenchResult quench(const QuenchConfig& cfg) {
  const std::size_t L = cfg.lattice.num_sites();
  const int N = static_cast<int>(L);
  ClosedQuenchResult result;
  result.tau = averaging_window(cfg);
  const std::vector<double> times = sample_times(cfg);
  const double shift = cfg.params.omega() * N;

  SparseMatrix h;
  StateVector psi0;
  std::shared_ptr<const SiteLabeledBasis> labels;
  if (cfg.representation == Representation::Effective) {
    const LowerBranchBasis basis(L, N);
    EffectiveHamiltonian eff = polariton_hamiltonian(cfg.lattice, cfg.params, cfg.hopping, basis);
    result.rwa = eff.rwa;
    result.effective_advisory = eff.advisory;
    if (eff.advisory) {
      std::string msg = "effective model outside its validity range:";
      for (const auto& f : eff.rwa.flagged()) msg += " " + f;
      result.warnings.push_back(msg);
    }
    SparseMatrix id(eff.matrix.rows(), eff.matrix.cols());
    id.setIdentity();
    h = eff.matrix - shift * id;
    psi0 = StateVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    const std::vector<int> ones(L, 1);
    psi0(static_cast<Eigen::Index>(basis.index(ones))) = 1.0;
    labels = std::make_shared<const SiteLabeledBasis>(basis.site_labels());
  } else {
    result.rwa = rwa_report(cfg.params, cfg.hopping, std::max(3, N));
    const ProductBasis basis(L, SiteSpace{cfg.n_max, false});
    const Subspace sector = Subspace::excitation_sector(basis, N);
    SparseMatrix full = jch_hamiltonian(cfg.lattice, cfg.params, cfg.hopping, basis);
    SparseMatrix id(static_cast<Eigen::Index>(sector.dimension()), static_cast<Eigen::Index>(sector.dimension()));
    id.setIdentity();
    h = sector.restrict(full) - shift * id;
    psi0 = sector.restrict(mott_initial_state(basis, cfg.params));
    labels = std::make_shared<const SiteLabeledBasis>(SiteLabeledBasis::from_subspace(sector));
  }

  result.trajectory.basis = labels;
  result.trajectory.times = times;
  result.trajectory.states = evolve_closed(h, psi0, times);

  // n_max Fock levels only cut the dynamics once N >= n_max
  if (cfg.representation == Representation::FullFock && N >= cfg.n_max) {
    double worst = 0.0;
    for (const StateVector& psi : result.trajectory.states) {
      worst = std::max(worst, top_level_population(*labels, cfg.n_max,
                                                   [&](std::size_t k) { return std::norm(psi(static_cast<Eigen::Index>(k))); }));
    }
    if (worst > cfg.truncation_warning) {
      result.warnings.push_back(format_warning("top Fock level population %.3e exceeds the truncation threshold", worst));
    }
  }
  return result;
}

OpenQuenchResult quench_open(const OpenQuenchConfig& cfg, const DenseMatrix& site_state) {
  const QuenchConfig& q = cfg.quench;
  if (q.representation != Representation::FullFock) {
    throw std::invalid_argument("open-system quench needs the full Fock representation");
  }
  cfg.rates.validate();
  const std::size_t L = q.lattice.num_sites();
  const int N = static_cast<int>(L);
  const ProductBasis basis(L, SiteSpace{q.n_max, false});

  DenseMatrix site_rho = site_state.size() == 0 ? lower_polariton_projector(q.params, q.n_max) : site_state;
  if (site_rho.rows() != static_cast<Eigen::Index>(basis.local_dim())) {
    throw std::invalid_argument("site state dimension does not match the site space");
  }
  validate_density_matrix(site_rho);

  OpenQuenchResult result;
  result.tau = averaging_window(q);
  const std::vector<double> times = sample_times(q);

  // Dissipation never raises the excitation number, so N <= L is invariant.
  const Subspace sub = Subspace::excitations_up_to(basis, N);
  DenseMatrix rho0 = sub.restrict(tensor_power(site_rho, L));
  const double kept = rho0.trace().real();
  result.discarded_weight = std::max(0.0, 1.0 - kept);
  if (!(kept > 0.0)) throw std::invalid_argument("initial state has no weight in the propagated subspace");
  rho0 /= kept;
  rho0 = 0.5 * (rho0 + rho0.adjoint()).eval();
  if (result.discarded_weight > 1e-6) {
    result.warnings.push_back(format_warning("discarded %.3e of the initial weight above N = L", result.discarded_weight));
  }

  const SparseMatrix n_op = sub.restrict(total_excitations(basis));
  const SparseMatrix h = sub.restrict(jch_hamiltonian(q.lattice, q.params, q.hopping, basis)) -
                         q.params.omega() * n_op;
  std::vector<CollapseOperator> collapse = lattice_collapse_operators(basis, cfg.rates);
  for (auto& c : collapse) c.op = sub.restrict(c.op);

  std::vector<DenseMatrix> states = evolve_lindblad(h, collapse, rho0, times, cfg.integrator);

  // Undo the rotating frame: rho_ab picks up exp(-i omega (N_a - N_b) t).
  Eigen::VectorXd n_diag(static_cast<Eigen::Index>(sub.dimension()));
  for (std::size_t k = 0; k < sub.dimension(); ++k) {
    n_diag(static_cast<Eigen::Index>(k)) = basis.excitations(sub.indices()[k]);
  }
  for (std::size_t s = 0; s < states.size(); ++s) {
    const double t = times[s];
    DenseMatrix& rho = states[s];
    for (Eigen::Index b = 0; b < rho.cols(); ++b) {
      for (Eigen::Index a = 0; a < rho.rows(); ++a) {
        const double dn = n_diag(a) - n_diag(b);
        if (dn != 0.0) rho(a, b) *= std::exp(-kImag * q.params.omega() * dn * t);
      }
    }
  }

  auto labels = std::make_shared<const SiteLabeledBasis>(SiteLabeledBasis::from_subspace(sub));
  double worst = 0.0;
  if (N >= q.n_max) {
    for (const DenseMatrix& rho : states) {
      worst = std::max(worst, top_level_population(*labels, q.n_max, [&](std::size_t k) {
                         return rho(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)).real();
                       }));
    }
  }
  if (worst > q.truncation_warning) {
    result.warnings.push_back(format_warning("top Fock level population %.3e exceeds the truncation threshold", worst));
  }
  result.trajectory.basis = labels;
  result.trajectory.times = times;
  result.trajectory.states = std::move(states);
  return result;
}

}  // namespace jch
