#include "qsense/linalg.hpp"

#include <cmath>

namespace qsense {

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix identity2() {
    return Matrix::Identity(2, 2);
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return max_abs_diff(m, m.adjoint()) <= tol;
}

std::pair<RealVector, Matrix> eigh(const Matrix& h, double herm_tol) {
    if (!is_hermitian(h, herm_tol))
        throw NonHermitianInput("eigh: input is not Hermitian within tolerance");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    RealVector vals = solver.eigenvalues();
    Matrix vecs = solver.eigenvectors();
    // Phase fixing: rotate each column so its largest-magnitude component
    // is real and positive.
    for (Eigen::Index k = 0; k < vecs.cols(); ++k) {
        Eigen::Index imax = 0;
        vecs.col(k).cwiseAbs().maxCoeff(&imax);
        const Complex z = vecs(imax, k);
        const double mag = std::abs(z);
        if (mag > 0) vecs.col(k) *= std::conj(z) / mag;
    }
    return {std::move(vals), std::move(vecs)};
}

Matrix expm_unitary(const Matrix& h, double dt, double herm_tol) {
    auto [vals, vecs] = eigh(h, herm_tol);
    Vector phases(vals.size());
    for (Eigen::Index k = 0; k < vals.size(); ++k)
        phases(k) = std::polar(1.0, -vals(k) * dt);
    return vecs * phases.asDiagonal() * vecs.adjoint();
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

double trace_distance(const Matrix& a, const Matrix& b) {
    auto [vals, vecs] = eigh(a - b, 1e-8);
    return 0.5 * vals.cwiseAbs().sum();
}

Vector normalized_state(const Vector& amplitudes) {
    const double n = amplitudes.norm();
    if (n == 0.0) throw std::invalid_argument("normalized_state: zero vector");
    return amplitudes / n;
}

void check_density_matrix(const Matrix& rho, double herm_tol, double trace_tol,
                          double positivity_tol) {
    if (!is_hermitian(rho, herm_tol))
        throw NonHermitianInput("density matrix: Hermiticity violated");
    if (std::abs(rho.trace().real() - 1.0) > trace_tol ||
        std::abs(rho.trace().imag()) > trace_tol)
        throw PositivityLoss("density matrix: trace deviates from 1");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(rho);
    if (solver.eigenvalues().minCoeff() < -positivity_tol)
        throw PositivityLoss("density matrix: negative eigenvalue");
}

}  // namespace qsense
