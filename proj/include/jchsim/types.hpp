#pragma once

#include <complex>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace jch {

using Complex = std::complex<double>;

// Operators act on an indexed product basis; Hamiltonians and ladder
// operators are stored sparse, density matrices dense.
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

inline constexpr Complex kImag{0.0, 1.0};

}  // namespace jch
