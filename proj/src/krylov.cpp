#include "krylov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

namespace jch::detail {

namespace {

// One-norm bound of H, used as the breakdown scale.
double operator_scale(const SparseMatrix& h) {
  double s = 0.0;
  for (int k = 0; k < h.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(h, k); it; ++it) col += std::abs(it.value());
    s = std::max(s, col);
  }
  return s;
}

}  // namespace

LanczosPropagator::LanczosPropagator(const SparseMatrix& hamiltonian, std::size_t krylov_dim,
                                     double tol)
    : h_(hamiltonian), m_(krylov_dim), tol_(tol), scale_(operator_scale(hamiltonian)) {
  if (m_ < 2) throw std::invalid_argument("Krylov dimension must be at least 2");
  if (!(tol_ > 0.0)) throw std::invalid_argument("Krylov tolerance must be positive");
}

StateVector LanczosPropagator::advance(const StateVector& psi, double dt) const {
  StateVector v = psi;
  const Eigen::Index n = v.size();
  const std::size_t m_cap = std::min<std::size_t>(m_, static_cast<std::size_t>(n));
  double remaining = dt;
  double step = dt;

  while (remaining > 0.0) {
    const double beta = v.norm();
    if (beta == 0.0) return v;

    DenseMatrix basis(n, static_cast<Eigen::Index>(m_cap));
    std::vector<double> alpha;
    std::vector<double> offdiag;  // offdiag[j] couples j and j+1
    basis.col(0) = v / beta;
    double residual = 0.0;
    bool invariant = false;
    std::size_t m = 0;
    for (std::size_t j = 0; j < m_cap; ++j) {
      StateVector w = h_ * basis.col(static_cast<Eigen::Index>(j));
      const double a = basis.col(static_cast<Eigen::Index>(j)).dot(w).real();
      alpha.push_back(a);
      // full reorthogonalization (twice is enough)
      for (int pass = 0; pass < 2; ++pass) {
        const auto cols = basis.leftCols(static_cast<Eigen::Index>(j + 1));
        w -= cols * (cols.adjoint() * w);
      }
      residual = w.norm();
      m = j + 1;
      if (residual <= 1e-13 * std::max(scale_, 1.0)) {
        invariant = true;
        break;
      }
      if (j + 1 < m_cap) {
        offdiag.push_back(residual);
        basis.col(static_cast<Eigen::Index>(j + 1)) = w / residual;
      }
    }
    if (m == static_cast<std::size_t>(n)) invariant = true;

    Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(m));
    Eigen::VectorXd sub(static_cast<Eigen::Index>(m > 0 ? m - 1 : 0));
    for (std::size_t j = 0; j + 1 < m; ++j) sub(static_cast<Eigen::Index>(j)) = offdiag[j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& q = eig.eigenvectors();
    const Eigen::VectorXd& e = eig.eigenvalues();

    auto small_propagator = [&](double h) {
      Eigen::VectorXcd c(static_cast<Eigen::Index>(m));
      for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(m); ++k) {
        c(k) = std::exp(-kImag * e(k) * h) * q(0, k);
      }
      return Eigen::VectorXcd(q.cast<Complex>() * c);
    };

    step = std::min(step, remaining);
    Eigen::VectorXcd y;
    for (int tries = 0;; ++tries) {
      y = small_propagator(step);
      if (invariant) break;
      const double err = beta * residual * std::abs(y(static_cast<Eigen::Index>(m) - 1));
      if (err <= tol_) break;
      if (tries > 200) throw std::runtime_error("Krylov step size underflow");
      step *= std::max(0.1, 0.9 * std::pow(tol_ / err, 1.0 / static_cast<double>(m)));
    }
    v = beta * (basis.leftCols(static_cast<Eigen::Index>(m)) * y);
    remaining -= step;
    if (remaining < 1e-15 * dt) remaining = 0.0;
    step *= 1.5;  // let the next substep grow again
  }
  return v;
}

}  // namespace jch::detail
