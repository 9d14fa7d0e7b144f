#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "jchsim/dynamics.hpp"
#include "jchsim/polariton.hpp"
#include "jchsim/site_basis.hpp"
#include "jchsim/types.hpp"

namespace jch {

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> values;
};

/// (1/tau) * trapezoid integral of the series over [0, tau]. The series must
/// start at t = 0 and reach tau; a final partial interval is interpolated.
/// Throws std::invalid_argument for a series shorter than tau.
double time_average(const TimeSeries& series, double tau);

// <n_i>(t)
TimeSeries polariton_number_series(const StateTrajectory& traj, std::size_t site);
TimeSeries polariton_number_series(const DensityTrajectory& traj, std::size_t site);

// <n_i^2> - <n_i>^2
TimeSeries variance_series(const StateTrajectory& traj, std::size_t site);
TimeSeries variance_series(const DensityTrajectory& traj, std::size_t site);

// <n_i n_j> - <n_i><n_j>, signed; i != j
TimeSeries correlation_series(const StateTrajectory& traj, std::size_t i, std::size_t j);
TimeSeries correlation_series(const DensityTrajectory& traj, std::size_t i, std::size_t j);

// 1 - Tr(rho_i^2)
TimeSeries linear_entropy_series(const StateTrajectory& traj, std::size_t site);
TimeSeries linear_entropy_series(const DensityTrajectory& traj, std::size_t site);

double variance_time_avg_numeric(const StateTrajectory& traj, std::size_t site, double tau);
double variance_time_avg_numeric(const DensityTrajectory& traj, std::size_t site, double tau);
double linear_entropy_time_avg(const StateTrajectory& traj, std::size_t site, double tau);
double linear_entropy_time_avg(const DensityTrajectory& traj, std::size_t site, double tau);
double two_point_correlation(const StateTrajectory& traj, std::size_t i, std::size_t j, double tau);
double two_point_correlation(const DensityTrajectory& traj, std::size_t i, std::size_t j, double tau);

/// Reduced density matrix of one site over its labels (labels_per_site square).
DenseMatrix reduced_density_matrix(const SiteLabeledBasis& basis, const StateVector& psi, std::size_t site);
DenseMatrix reduced_density_matrix(const SiteLabeledBasis& basis, const DenseMatrix& rho, std::size_t site);

/// A dressed product state, one (n, branch) per site.
struct PopulationLabel {
  std::string name;
  std::vector<std::pair<int, Branch>> sites;
};

/// Dimer names: psi0, psi2+_i, psi2-_i, psi2+_j, psi2-_j, psi1+_i, psi1+_j, psi1+_ij.
/// Trimer names: psi0, psi3i, psi3j, psi3k, psi2i1j, psi1j2k, psi1i2j, psi2j1k,
/// psi2i1k, psi1i2k. psi0 is the Mott state on any lattice.
/// Throws std::invalid_argument for an unknown name.
PopulationLabel population_label(const std::string& name, std::size_t num_sites);

/// Label names available for a lattice of the given size.
std::vector<std::string> population_label_names(std::size_t num_sites);

/// The labeled state expressed in `basis` (zero where the basis cannot hold it).
StateVector dressed_product_state(const SiteLabeledBasis& basis, const PopulationLabel& label,
                                  const JCParams& p);

/// |<label|psi(t)>|^2 (or <label|rho(t)|label>) for every label.
std::vector<TimeSeries> labeled_populations(const StateTrajectory& traj, const JCParams& p,
                                            const std::vector<std::string>& labels);
std::vector<TimeSeries> labeled_populations(const DensityTrajectory& traj, const JCParams& p,
                                            const std::vector<std::string>& labels);

}  // namespace jch
