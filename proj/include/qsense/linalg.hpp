#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>

#include "qsense/errors.hpp"

namespace qsense {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermTol = 1e-10;

/// Pauli matrices and the 2x2 identity, basis order |g>, |e> with
/// sigma_z |g> = +|g>.
Matrix pauli_x();
Matrix pauli_z();
Matrix identity2();

/// Tensor product, left factor major.
Matrix kron(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& m, double tol = kHermTol);

/// Eigendecomposition of a Hermitian matrix. Eigenvalues ascending,
/// eigenvector columns orthonormal, each column's largest-magnitude
/// component rotated to the real-positive axis.
/// Throws NonHermitianInput when the Hermiticity check fails.
std::pair<RealVector, Matrix> eigh(const Matrix& h, double herm_tol = kHermTol);

/// exp(-i h dt) for Hermitian h, computed through the eigendecomposition.
Matrix expm_unitary(const Matrix& h, double dt, double herm_tol = kHermTol);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const Matrix& a, const Matrix& b);

/// Trace distance (1/2)||a - b||_1 between two Hermitian matrices.
double trace_distance(const Matrix& a, const Matrix& b);

/// Normalized pure state. Throws std::invalid_argument on a zero vector.
Vector normalized_state(const Vector& amplitudes);

/// Density-matrix sanity checks: Hermitian within herm_tol, unit trace
/// within trace_tol, eigenvalues >= -positivity_tol.
void check_density_matrix(const Matrix& rho, double herm_tol = 1e-10,
                          double trace_tol = 1e-10, double positivity_tol = 1e-9);

}  // namespace qsense
