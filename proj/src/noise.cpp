#include "qsense/noise.hpp"

#include <cmath>

#include "qsense/model.hpp"

namespace qsense {

const char* noise_class_name(NoiseClass c) {
    switch (c) {
        case NoiseClass::QsCorrelated: return "qs_correlated";
        case NoiseClass::QsAnticorrelated: return "qs_anticorrelated";
        case NoiseClass::QsUncorrelated: return "qs_uncorrelated";
        case NoiseClass::MkCorrelated: return "mk_correlated";
        case NoiseClass::MkAnticorrelated: return "mk_anticorrelated";
    }
    return "unknown";
}

NoiseClass noise_class_from_label(int label) {
    if (label < 0 || label >= kNumNoiseClasses)
        throw BadRange("noise class label out of range");
    return static_cast<NoiseClass>(label);
}

bool is_markovian(NoiseClass c) {
    return c == NoiseClass::MkCorrelated || c == NoiseClass::MkAnticorrelated;
}

void QuasistaticSpec::validate() const {
    if (!(sigma >= 0.0)) throw BadRange("QuasistaticSpec: sigma must be >= 0");
    if (!(std::abs(corr) <= 1.0)) throw BadRange("QuasistaticSpec: |corr| must be <= 1");
}

void MarkovSpec::validate() const {
    if (!(gamma >= 0.0)) throw BadRange("MarkovSpec: gamma must be >= 0");
    if (sign != 1 && sign != -1) throw BadRange("MarkovSpec: sign must be +1 or -1");
}

void NoiseRanges::validate() const {
    if (!(corr_min > 0.0 && corr_min < 1.0))
        throw BadRange("NoiseRanges: corr_min must be in (0, 1)");
    if (!(sigma0 >= 0.0)) throw BadRange("NoiseRanges: sigma0 must be >= 0");
    if (!(sigma_lo <= sigma_hi) || sigma_lo < 0.0)
        throw BadRange("NoiseRanges: need 0 <= sigma_lo <= sigma_hi");
    if (!(gamma_lo <= gamma_hi) || !(gamma_lo > 0.0))
        throw BadRange("NoiseRanges: need 0 < gamma_lo <= gamma_hi (log-uniform draw)");
}

QuasistaticRealization sample_quasistatic(const QuasistaticSpec& spec, RngStream& rng) {
    spec.validate();
    const double n1 = rng.normal();
    const double n2 = rng.normal();
    // Cholesky factor of [[1, c], [c, 1]].
    const double c = spec.corr;
    const double d1 = spec.sigma * n1;
    const double d2 = spec.sigma * (c * n1 + std::sqrt(1.0 - c * c) * n2);
    return {d1, d2};
}

Dissipator build_dissipator(const MarkovSpec& spec) {
    spec.validate();
    Dissipator d;
    d.op = 0.5 * (sigma1z() + static_cast<double>(spec.sign) * sigma2z());
    d.rate = 2.0 * spec.gamma;
    return d;
}

ClassParams draw_class_params(NoiseClass c, RngStream& rng, const NoiseRanges& ranges) {
    ranges.validate();
    switch (c) {
        case NoiseClass::QsCorrelated: {
            const double corr = ranges.fixed_corr ? 1.0 : rng.uniform(ranges.corr_min, 1.0);
            return QuasistaticSpec{ranges.sigma0, corr};
        }
        case NoiseClass::QsAnticorrelated: {
            const double corr = ranges.fixed_corr ? -1.0 : -rng.uniform(ranges.corr_min, 1.0);
            return QuasistaticSpec{ranges.sigma0, corr};
        }
        case NoiseClass::QsUncorrelated:
            return QuasistaticSpec{rng.uniform(ranges.sigma_lo, ranges.sigma_hi), 0.0};
        case NoiseClass::MkCorrelated:
        case NoiseClass::MkAnticorrelated: {
            // log-uniform; the max guards against exp() rounding a hair
            // below the lower bound.
            const double gamma = std::max(
                ranges.gamma_lo,
                std::exp(rng.uniform(std::log(ranges.gamma_lo), std::log(ranges.gamma_hi))));
            return MarkovSpec{gamma, c == NoiseClass::MkCorrelated ? +1 : -1};
        }
    }
    throw BadRange("draw_class_params: unknown class");
}

}  // namespace qsense
