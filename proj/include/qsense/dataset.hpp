#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qsense/control.hpp"
#include "qsense/dynamics.hpp"
#include "qsense/noise.hpp"

namespace qsense {

/// How the Markovian classes are sampled when building dataset points.
/// Lindblad is the exact deterministic ensemble average (stderr = 0);
/// Trajectories draws the same finite-N statistics as the quasistatic
/// classes, which is what a measured ensemble of N runs would yield.
enum class MkSampling : int {
    Lindblad = 0,
    Trajectories = 1,
};

/// One labeled dataset point: the three-condition transfer efficiencies,
/// their standard errors, and the drawn noise parameters.
struct FeatureVector {
    std::array<double, 3> xi{};       // COND_I, COND_II, COND_III
    std::array<double, 3> stderr_{};  // matching standard errors
    int label = 0;                    // NoiseClass order, 0..4
    std::string param_name;           // "corr", "sigma" or "gamma"
    double param_value = 0.0;
    double sigma = 0.0;               // quasistatic width used (0 for Markovian)
    std::uint64_t point_seed = 0;

    void validate() const;
};

struct Dataset {
    std::vector<FeatureVector> rows;
    std::string meta_json;  // full generation config snapshot
};

/// Everything dataset generation depends on, aggregated so a Dataset is a
/// pure function of (config, master seed).
struct GenerationConfig {
    SystemParams system;
    ProtocolTiming timing;
    IntegratorConfig integrator;
    NoiseRanges ranges;
    int per_class = 500;
    int n_realizations = 200;
    std::uint64_t master_seed = 1;
    MkSampling mk_sampling = MkSampling::Trajectories;
    bool parallel = true;

    void validate() const;
};

/// The three per-condition engines a generation run shares across points.
class EngineSet {
  public:
    EngineSet(const SystemParams& p, const ProtocolTiming& timing,
              const IntegratorConfig& cfg);
    const TransferEngine& engine(DrivingCondition c) const;

  private:
    std::vector<TransferEngine> engines_;
};

/// Point seed of (class, point index) under a master seed.
std::uint64_t point_seed_of(std::uint64_t master_seed, NoiseClass c, int point_index);

/// Draws the class parameters once (stream derive_seed(point_seed, 0)), then
/// estimates xi under each driving condition with the same drawn parameters
/// (condition cond's Monte-Carlo stream seeded derive_seed(point_seed,
/// 1 + cond)). Deterministic given point_seed.
FeatureVector generate_point(NoiseClass c, std::uint64_t point_seed,
                             const GenerationConfig& cfg, const EngineSet& engines);

/// All 5 classes x per_class points, class-major, point-index-minor.
Dataset generate_dataset(const GenerationConfig& cfg);

/// CSV schema (bit-exact): header
///   label,class,param_name,param_value,sigma,xi_i,xi_ii,xi_iii,
///   stderr_i,stderr_ii,stderr_iii,point_seed
/// one row per point, floats %.17g, UTF-8, LF line endings. The meta JSON
/// is written to path + ".meta.json".
void save_csv(const Dataset& d, const std::string& path);
Dataset load_csv(const std::string& path);

}  // namespace qsense
