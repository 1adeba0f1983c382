#pragma once

#include "qsense/linalg.hpp"

namespace qsense {

/// Physical constants of the two-qubit probe, hbar = 1 angular-frequency
/// units. epsilon is the common qubit splitting, g the x-x coupling.
struct SystemParams {
    double epsilon = 1.0;
    double g = 1.0;

    void validate() const;
    double coupling_ratio() const { return g / epsilon; }
};

enum class Parity { Even, Odd, Mixed };

/// Energy eigenbasis of the undriven system with fixed label assignment:
///   |0> ground state (exchange-even),
///   |1> highest state of the {|gg>,|ee>}-dominated even pair,
///   |2> symmetric single-excitation state (energy +g/2),
///   |3> antisymmetric single-excitation state (energy -g/2, exchange-odd).
struct EigenFrame {
    Eigen::Vector4d energies;  // (E0, E1, E2, E3) in label order
    Matrix basis;              // columns map product basis -> labels
    double omega_20 = 0.0;     // E2 - E0
    double omega_12 = 0.0;     // E1 - E2
};

/// SWAP operator exchanging the two qubits (product basis).
Matrix swap_gate();

/// sigma_1^z, sigma_2^z, sigma_1^x + sigma_2^x in the product basis
/// |gg>, |ge>, |eg>, |ee> (qubit 1 is the left tensor factor).
Matrix sigma1z();
Matrix sigma2z();
Matrix sigma_x_total();

/// H = -(eps/2) s1z - (eps/2) s2z + (g/2) s1x s2x
Matrix build_h_sys(const SystemParams& p);

/// H = -(d1/2) s1z - (d2/2) s2z
Matrix build_h_noise(double delta1, double delta2);

/// Ladder Hamiltonian (1/sqrt2)(Wp |0><2| + Ws |1><2| + h.c.), written
/// in eigenbasis labels with a zero row and column for |3>.
Matrix build_h_rwa(double omega_p, double omega_s);

/// Diagonalizes H_sys and assigns the labels above. Throws
/// DegenerateSpectrum when levels are closer than degeneracy_tol * epsilon.
EigenFrame build_eigenframe(const SystemParams& p, double degeneracy_tol = 1e-9);

/// Exchange parity of a normalized state under SWAP.
Parity exchange_parity(const Vector& v, double tol = 1e-8);

}  // namespace qsense
