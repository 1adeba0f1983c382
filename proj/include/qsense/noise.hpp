#pragma once

#include <cstdint>
#include <string>
#include <variant>

#include "qsense/linalg.hpp"
#include "qsense/rng.hpp"

namespace qsense {

/// The five noise classes, in the fixed label order used by the classifier.
enum class NoiseClass : int {
    QsCorrelated = 0,
    QsAnticorrelated = 1,
    QsUncorrelated = 2,
    MkCorrelated = 3,
    MkAnticorrelated = 4,
};

inline constexpr int kNumNoiseClasses = 5;

const char* noise_class_name(NoiseClass c);
NoiseClass noise_class_from_label(int label);
bool is_markovian(NoiseClass c);

/// Bivariate Gaussian statistics of the quasistatic splittings (d1, d2):
/// both zero mean with standard deviation sigma and correlation corr.
struct QuasistaticSpec {
    double sigma = 0.0;
    double corr = 0.0;

    void validate() const;
};

/// Delta-correlated dephasing with <d(t) d(t')> = 2 gamma delta(t - t'),
/// coupled through -(d(t)/2)(s1z + sign s2z). gamma is then the pure
/// dephasing rate of a single qubit.
struct MarkovSpec {
    double gamma = 0.0;
    int sign = +1;  // +1 correlated, -1 anticorrelated

    void validate() const;
};

/// A concrete quasistatic draw.
struct QuasistaticRealization {
    double delta1 = 0.0;
    double delta2 = 0.0;
};

/// Hermitian jump operator and the coefficient of its Lindblad term
/// rate * (A rho A - 1/2 {A^2, rho}).
struct Dissipator {
    Matrix op;
    double rate = 0.0;
};

/// Draws (d1, d2) jointly Gaussian with Var = sigma^2, Corr = corr.
QuasistaticRealization sample_quasistatic(const QuasistaticSpec& spec, RngStream& rng);

/// A = (s1z + sign s2z)/2. The returned rate is 2 gamma: the exact
/// ensemble average of the white-noise Hamiltonian above is
/// -gamma [A, [A, rho]] = 2 gamma (A rho A - 1/2 {A^2, rho}).
Dissipator build_dissipator(const MarkovSpec& spec);

/// Per-class parameter ranges used when generating dataset points.
///
/// The defaults are tuned so the five classes carry the intended amount of
/// overlap in feature space: the uncorrelated width range stops below the
/// point where its feature curve crosses the (anti)correlated clusters,
/// and the dephasing-rate range reaches low enough that the two Markovian
/// classes merge near the noise-free corner, which is what makes them the
/// hard pair to separate.
struct NoiseRanges {
    double corr_min = 0.1;     // |c| lower bound when corr is drawn
    double sigma0 = 0.1;       // fixed width of the correlated classes
    double sigma_lo = 0.02;    // width range of the uncorrelated class
    double sigma_hi = 0.08;
    double gamma_lo = 1e-6;    // dephasing-rate range of the Markovian classes
    double gamma_hi = 0.02;
    bool fixed_corr = true;    // when set, use corr = +/-1 instead of drawing

    void validate() const;
};

using ClassParams = std::variant<QuasistaticSpec, MarkovSpec>;

/// Draws the per-point noise parameters of a class:
///   QsCorrelated:     corr ~ U(corr_min, 1],  sigma = sigma0
///   QsAnticorrelated: corr ~ U[-1, -corr_min), sigma = sigma0
///   QsUncorrelated:   corr = 0, sigma ~ U(sigma_lo, sigma_hi)
///   Mk*:              log gamma ~ U(log gamma_lo, log gamma_hi)
/// The dephasing rate is drawn log-uniformly because it spans four
/// decades and the feature response is roughly logarithmic in gamma.
ClassParams draw_class_params(NoiseClass c, RngStream& rng, const NoiseRanges& ranges);

}  // namespace qsense
