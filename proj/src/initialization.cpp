#include "jchsim/initialization.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace jch {

namespace {

std::string describe(const char* fmt, double a, double b = 0.0) {
  char buf[200];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

// Single-site dressed state |1,branch> (x) |ancilla>.
StateVector dressed_one(const ProductBasis& b, const JCParams& p, Branch branch, int ancilla) {
  const PolaritonCoeffs c = coefficients(1, p);
  StateVector v = StateVector::Zero(static_cast<Eigen::Index>(b.dimension()));
  v(static_cast<Eigen::Index>(b.local_index({1, 0, ancilla}))) = c.gamma(branch);
  v(static_cast<Eigen::Index>(b.local_index({0, 1, ancilla}))) = c.rho(branch);
  return v;
}

double population(const DenseMatrix& rho, const StateVector& v) {
  return (v.adjoint() * rho * v).value().real();
}

// rho_ab -> rho_ab exp(-i omega (N_a - N_b) t): rotating frame back to the lab frame.
void to_lab_frame(DenseMatrix& rho, const ProductBasis& b, double omega, double t) {
  for (Eigen::Index c = 0; c < rho.cols(); ++c) {
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
      const int dn = b.excitations(static_cast<std::size_t>(r), true) - b.excitations(static_cast<std::size_t>(c), true);
      if (dn != 0) rho(r, c) *= std::exp(-kImag * omega * static_cast<double>(dn) * t);
    }
  }
}

}  // namespace

InitializationResult initialize_with_ancilla(const InitializationConfig& cfg) {
  const JCParams& p = cfg.params;
  if (!(cfg.g_ancilla > 0.0)) throw std::invalid_argument("ancilla coupling g_A must be positive");
  const PulseSpec& pulse = cfg.pulse;
  if (!(pulse.park_factor > 0.0) || !(pulse.sigma_factor > 0.0) || !(pulse.truncation > 0.0)) {
    throw std::invalid_argument("pulse parameters must be positive");
  }
  cfg.site_rates.validate();
  cfg.ancilla_rates.validate();

  InitializationResult res;
  const ProductBasis basis(1, SiteSpace{cfg.n_max, true});
  const double e1 = polariton_energy(1, Branch::Lower, p);
  const double two_chi = 2.0 * chi(1, p);
  const double t1 = hopping_element(1, Branch::Lower, Branch::Lower, p);
  if (cfg.g_ancilla > 0.1 * two_chi) {
    res.warnings.push_back(describe("g_A = %.4g is not small against E1+ - E1- = %.4g; expect leakage into |1,+>",
                                    cfg.g_ancilla, two_chi));
  }

  const double park = pulse.park_factor * cfg.g_ancilla;
  const double omega_park = e1 - park;
  const double sigma = pulse.sigma_factor / park;
  const double half_width = pulse.truncation * sigma;
  res.pulse_duration = 2.0 * half_width;
  res.swap_time = pulse.swap_time ? *pulse.swap_time : M_PI / (2.0 * cfg.g_ancilla * t1);
  if (!(res.swap_time > 0.0)) throw std::invalid_argument("swap time must be positive");

  const SparseMatrix n_tot = total_excitations(basis, true);
  const SparseMatrix h_park = ancilla_site_hamiltonian(p, omega_park, cfg.g_ancilla, cfg.n_max);
  const SparseMatrix h_swap = ancilla_site_hamiltonian(p, e1, cfg.g_ancilla, cfg.n_max);
  const SparseMatrix sigma_plus = site_operator(basis, SiteOperator::AncillaSigmaPlus, 0);

  // Dressed ancilla transition at the parking point and its dipole element.
  const StateVector ground = [&] {
    StateVector v = StateVector::Zero(static_cast<Eigen::Index>(basis.dimension()));
    v(static_cast<Eigen::Index>(basis.local_index({0, 0, 0}))) = 1.0;
    return v;
  }();
  const StateVector bare_up = sigma_plus * ground;
  const DenseMatrix h_park_dense(h_park);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(h_park_dense);
  Eigen::Index best = 0;
  double best_overlap = -1.0;
  for (Eigen::Index k = 0; k < eig.eigenvalues().size(); ++k) {
    const double o = std::abs(eig.eigenvectors().col(k).dot(bare_up));
    if (o > best_overlap) {
      best_overlap = o;
      best = k;
    }
  }
  const double omega_drive = eig.eigenvalues()(best);  // ground energy is 0
  const double dipole = best_overlap;
  // area of the truncated Gaussian Omega(t) equals pi
  const double amplitude = M_PI / (dipole * sigma * std::sqrt(2.0 * M_PI) * std::erf(pulse.truncation / std::sqrt(2.0)));

  std::vector<CollapseOperator> collapse = lattice_collapse_operators(basis, cfg.site_rates);
  if (cfg.ancilla_rates.gamma > 0.0) {
    collapse.push_back({cfg.ancilla_rates.gamma, site_operator(basis, SiteOperator::AncillaSigmaMinus, 0)});
  }
  if (cfg.ancilla_rates.gamma_phi > 0.0) {
    collapse.push_back({cfg.ancilla_rates.gamma_phi, site_operator(basis, SiteOperator::AncillaSigmaZ, 0)});
  }

  const double w = p.omega();
  const double offset = omega_drive - w;  // drive frequency seen in the rotating frame
  DriveTerm drive;
  drive.op = sigma_plus;
  drive.envelope = [=](double t) -> Complex {
    const double x = (t - half_width) / sigma;
    return 0.5 * amplitude * std::exp(-0.5 * x * x) * std::exp(-kImag * offset * t);
  };
  const std::vector<DriveTerm> drives{drive};

  DenseMatrix rho = ground * ground.adjoint();
  {
    const std::vector<double> grid{0.0, res.pulse_duration};
    rho = evolve_lindblad(h_park - w * n_tot, collapse, rho, grid, cfg.integrator, drives).back();
  }
  res.pulse_fidelity = population(rho, bare_up);
  {
    // Sudden Stark step: the ancilla is on resonance with E1^- for the swap time.
    const std::vector<double> grid{0.0, res.swap_time};
    rho = evolve_lindblad(h_swap - w * n_tot, collapse, rho, grid, cfg.integrator).back();
  }
  // Stepping the ancilla back below E1^- is instantaneous; trace it out right away.
  to_lab_frame(rho, basis, w, res.pulse_duration + res.swap_time);
  res.with_ancilla = rho;

  const auto site_dim = static_cast<Eigen::Index>(2 * cfg.n_max);
  DenseMatrix site = DenseMatrix::Zero(site_dim, site_dim);
  for (Eigen::Index r = 0; r < site_dim; ++r) {
    for (Eigen::Index c = 0; c < site_dim; ++c) site(r, c) = rho(2 * r, 2 * c) + rho(2 * r + 1, 2 * c + 1);
  }
  res.site_state = 0.5 * (site + site.adjoint());

  res.fidelity = population(rho, dressed_one(basis, p, Branch::Lower, 0));
  res.leakage = population(rho, dressed_one(basis, p, Branch::Upper, 0)) +
                population(rho, dressed_one(basis, p, Branch::Upper, 1));
  const SparseMatrix n_anc = site_operator(basis, SiteOperator::AncillaNumber, 0);
  res.excited_ancilla = (DenseMatrix(n_anc) * rho).trace().real();

  if (res.leakage > cfg.leakage_warning) {
    res.warnings.push_back(describe("leakage into |1,+> is %.3e (threshold %.1e)", res.leakage, cfg.leakage_warning));
  }
  if (res.fidelity < cfg.fidelity_floor) {
    res.warnings.push_back(describe("preparation fidelity %.4f is below the floor %.2f", res.fidelity, cfg.fidelity_floor));
  }
  return res;
}

}  // namespace jch
