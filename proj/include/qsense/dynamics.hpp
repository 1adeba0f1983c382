#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "qsense/control.hpp"
#include "qsense/model.hpp"
#include "qsense/noise.hpp"
#include "qsense/rng.hpp"

namespace qsense {

enum class Backend { RotatingFrame, LabFrame };

/// Fixed-step RK4 settings. The step bounds below are hard preconditions;
/// accuracy at the defaults is covered by the convergence tests.
struct IntegratorConfig {
    Backend backend = Backend::RotatingFrame;
    double dt = 0.05;

    /// Throws StepTooLarge when dt violates the backend's bound:
    /// rotating frame dt <= 0.05 / max pulse peak, lab frame
    /// dt <= 0.02 * (2 pi / omega_20).
    void validate(const DriveSpec& drive) const;
};

struct RunResult {
    Matrix final_state;           // density matrix, product basis
    Eigen::Vector4d populations;  // eigenbasis labels 0..3
    double xi = 0.0;              // <ee| rho_f |ee>
    double max_p3 = 0.0;          // max over time of eigen-population P3
};

/// One sampled row of a population-vs-time trace (eigenbasis populations
/// plus the product-basis |ee> population).
struct TraceRow {
    double t;
    double p[4];
    double p_ee;
};

/// Propagates |0> under H_sys + H_noise(d1, d2) + W(t)(s1x + s2x).
///
/// RotatingFrame works in the eigenbasis interaction picture: the noise
/// matrix is transformed to the eigenbasis and every element keeps its
/// rotating phase e^{i(Ek - El)t}; the drive acts on the (0,2) and (1,2)
/// matrix elements with both tones and both quadratures retained. Keeping
/// the full drive is deliberate: the tone separation omega_20 - omega_12
/// equals the 2-3 splitting g identically, so terms beating at it are
/// resonant once noise breaks the exchange symmetry, and dropping them
/// changes final populations at the 1e-1 level for sigma ~ 0.1 eps.
///
/// LabFrame integrates the product-basis Hamiltonian directly and is the
/// cross-validation oracle.
RunResult propagate_quasistatic(const SystemParams& p, const DriveSpec& d,
                                const QuasistaticRealization& r,
                                const IntegratorConfig& cfg);

/// As propagate_quasistatic but records the populations every
/// `sample_stride` steps.
RunResult propagate_quasistatic_traced(const SystemParams& p, const DriveSpec& d,
                                       const QuasistaticRealization& r,
                                       const IntegratorConfig& cfg, int sample_stride,
                                       std::vector<TraceRow>& trace);

/// Deterministic Lindblad propagation of rho = |0><0| with the dissipator
/// of build_dissipator(spec): rho' = -i[H(t), rho] + rate (A rho A -
/// 1/2 {A^2, rho}).
RunResult propagate_lindblad(const SystemParams& p, const DriveSpec& d,
                             const MarkovSpec& spec, const IntegratorConfig& cfg);

RunResult propagate_lindblad_traced(const SystemParams& p, const DriveSpec& d,
                                    const MarkovSpec& spec, const IntegratorConfig& cfg,
                                    int sample_stride, std::vector<TraceRow>& trace);

/// Stochastic-trajectory oracle for the Lindblad path: white noise is
/// approximated per step by delta_n = sqrt(2 gamma / dt) n with n standard
/// normal, coupled through -delta_n A; the density matrix is averaged over
/// m trajectories. Deterministic given (rng seed, m).
RunResult propagate_trajectories(const SystemParams& p, const DriveSpec& d,
                                 const MarkovSpec& spec, int m,
                                 const IntegratorConfig& cfg, std::uint64_t seed);

namespace detail {
class Solver;
}

struct MonteCarloConfig {
    int n_realizations = 200;
    std::uint64_t master_seed = 1;
    bool parallel = true;
};

struct XiEstimate {
    double mean = 0.0;
    double stderr = 0.0;
};

/// Reusable propagation engine for one (system, drive, integrator) triple.
/// Precomputes the eigenframe and the interaction-picture phase tables,
/// which dominate setup cost; all run methods are const and thread-safe.
class TransferEngine {
  public:
    TransferEngine(const SystemParams& p, const DriveSpec& d, const IntegratorConfig& cfg);
    ~TransferEngine();
    TransferEngine(TransferEngine&&) noexcept;
    TransferEngine& operator=(TransferEngine&&) noexcept;

    const EigenFrame& frame() const;
    RunResult run_quasistatic(const QuasistaticRealization& r) const;
    RunResult run_lindblad(const MarkovSpec& spec) const;
    RunResult run_trajectories(const MarkovSpec& spec, int m, std::uint64_t seed) const;

    /// Ensemble-averaged transfer efficiency for one noise parameter set.
    /// Quasistatic classes: mean and standard error over n_realizations
    /// independent draws, realization r seeded by derive_seed(master_seed, r)
    /// and accumulated in index order, so the result does not depend on
    /// parallel execution. Markovian classes: single deterministic Lindblad
    /// solve, stderr = 0.
    XiEstimate xi_estimate(const ClassParams& params, const MonteCarloConfig& mc) const;

    /// Trajectory-sampled transfer efficiency for a Markovian class: mean
    /// and standard error of the per-trajectory final |ee> population over
    /// mc.n_realizations stochastic trajectories, trajectory j seeded by
    /// derive_seed(master_seed, j) and accumulated in index order. This is
    /// the finite-ensemble counterpart of the deterministic Lindblad value
    /// in xi_estimate, putting the Markovian classes on the same statistical
    /// footing as the quasistatic ones.
    XiEstimate xi_trajectories(const MarkovSpec& spec, const MonteCarloConfig& mc) const;

  private:
    std::unique_ptr<detail::Solver> impl_;
};

/// One-shot form of TransferEngine::xi_estimate.
XiEstimate monte_carlo_xi(const SystemParams& p, const DriveSpec& d,
                          const ClassParams& params, const MonteCarloConfig& mc,
                          const IntegratorConfig& cfg);

}  // namespace qsense
