#include "qsense/model.hpp"

#include <cmath>

namespace qsense {

void SystemParams::validate() const {
    if (!(epsilon > 0.0)) throw ConfigError("SystemParams: epsilon must be > 0");
    if (!(g >= 0.0)) throw ConfigError("SystemParams: g must be >= 0");
}

Matrix swap_gate() {
    Matrix s = Matrix::Zero(4, 4);
    s(0, 0) = 1;
    s(1, 2) = 1;
    s(2, 1) = 1;
    s(3, 3) = 1;
    return s;
}

Matrix sigma1z() { return kron(pauli_z(), identity2()); }
Matrix sigma2z() { return kron(identity2(), pauli_z()); }

Matrix sigma_x_total() {
    return kron(pauli_x(), identity2()) + kron(identity2(), pauli_x());
}

Matrix build_h_sys(const SystemParams& p) {
    // No validation: pure construction, defined for any (epsilon, g).
    return -0.5 * p.epsilon * (sigma1z() + sigma2z()) +
           0.5 * p.g * kron(pauli_x(), pauli_x());
}

Matrix build_h_noise(double delta1, double delta2) {
    return -0.5 * delta1 * sigma1z() - 0.5 * delta2 * sigma2z();
}

Matrix build_h_rwa(double omega_p, double omega_s) {
    Matrix h = Matrix::Zero(4, 4);
    const double f = 1.0 / std::sqrt(2.0);
    h(0, 2) = f * omega_p;
    h(2, 0) = f * omega_p;
    h(1, 2) = f * omega_s;
    h(2, 1) = f * omega_s;
    return h;
}

EigenFrame build_eigenframe(const SystemParams& p, double degeneracy_tol) {
    p.validate();
    auto [vals, vecs] = eigh(build_h_sys(p));

    const double gap_tol = degeneracy_tol * p.epsilon;
    for (int i = 0; i < 3; ++i)
        if (std::abs(vals(i + 1) - vals(i)) <= gap_tol)
            throw DegenerateSpectrum("build_eigenframe: spectrum too close for labeling");

    const Matrix swap = swap_gate();

    // |3> is the unique exchange-odd eigenvector.
    int k3 = -1;
    for (int k = 0; k < 4; ++k) {
        const Complex par = vecs.col(k).dot(swap * vecs.col(k));
        if (par.real() < -0.5) {
            k3 = k;
            break;
        }
    }
    if (k3 < 0) throw DegenerateSpectrum("build_eigenframe: no exchange-odd eigenstate");

    // |2> is the even eigenvector living in the single-excitation subspace.
    int k2 = -1;
    double best = -1.0;
    for (int k = 0; k < 4; ++k) {
        if (k == k3) continue;
        const double w = std::norm(vecs(1, k)) + std::norm(vecs(2, k));
        if (w > best) {
            best = w;
            k2 = k;
        }
    }

    // Remaining pair: |0> the lower, |1> the higher.
    int rest[2];
    int n = 0;
    for (int k = 0; k < 4; ++k)
        if (k != k2 && k != k3) rest[n++] = k;
    const int k0 = vals(rest[0]) <= vals(rest[1]) ? rest[0] : rest[1];
    const int k1 = rest[0] + rest[1] - k0;

    EigenFrame frame;
    const int order[4] = {k0, k1, k2, k3};
    frame.basis = Matrix(4, 4);
    for (int k = 0; k < 4; ++k) {
        frame.energies(k) = vals(order[k]);
        frame.basis.col(k) = vecs.col(order[k]);
    }
    frame.omega_20 = frame.energies(2) - frame.energies(0);
    frame.omega_12 = frame.energies(1) - frame.energies(2);
    return frame;
}

Parity exchange_parity(const Vector& v, double tol) {
    const Vector sv = swap_gate() * v;
    if ((sv - v).cwiseAbs().maxCoeff() <= tol) return Parity::Even;
    if ((sv + v).cwiseAbs().maxCoeff() <= tol) return Parity::Odd;
    return Parity::Mixed;
}

}  // namespace qsense
