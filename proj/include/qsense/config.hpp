#pragma once

#include <cstdint>
#include <string>

#include "qsense/control.hpp"
#include "qsense/dataset.hpp"
#include "qsense/dynamics.hpp"
#include "qsense/mlp.hpp"
#include "qsense/model.hpp"
#include "qsense/noise.hpp"

namespace qsense {

/// Every knob of a full run, aggregated in one strictly-validated document.
/// All defaults live here; nothing physical is hard-coded downstream.
struct RunConfig {
    SystemParams physical;
    ProtocolTiming pulses;
    IntegratorConfig integrator;   // single-shot simulation / oracles
    NoiseRanges noise;

    // Dataset generation. dataset_dt may be coarser than integrator.dt:
    // the induced xi bias is far below the Monte-Carlo standard error and
    // the full reproduction run is ~10^6 solves.
    int per_class = 500;
    int n_realizations = 200;
    std::uint64_t master_seed = 20260826;
    MkSampling mk_sampling = MkSampling::Trajectories;
    double dataset_dt = 0.1;
    bool parallel = true;

    // Classifier.
    MlpHyperparams classifier;
    SplitFractions fractions;
    std::uint64_t init_seed = 1;
    std::uint64_t split_seed = 2;

    std::string output_dir = "out";

    void validate() const;

    /// The dataset-generation view of this config.
    GenerationConfig generation() const;
};

/// Strict JSON round-trip: unknown keys anywhere are rejected with
/// ConfigError, as are type mismatches and invariant violations.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string dump_config(const RunConfig& c);

}  // namespace qsense
