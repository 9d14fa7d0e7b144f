#pragma once

#include <cstddef>

#include "jchsim/types.hpp"

namespace jch::detail {

/// Short-time Lanczos propagator for exp(-i H t) psi with Hermitian sparse H.
/// Each substep builds an m-dimensional Krylov space (full
/// reorthogonalization) and shrinks the step until the a-posteriori error
/// estimate beta * h_{m+1,m} |e_m^T exp(-i T dt) e_1| is below `tol`.
class LanczosPropagator {
 public:
  LanczosPropagator(const SparseMatrix& hamiltonian, std::size_t krylov_dim, double tol);

  StateVector advance(const StateVector& psi, double dt) const;

 private:
  const SparseMatrix& h_;
  std::size_t m_;
  double tol_;
  double scale_;
};

}  // namespace jch::detail
