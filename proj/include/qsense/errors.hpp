#pragma once

#include <stdexcept>
#include <string>

namespace qsense {

struct NonHermitianInput : std::runtime_error {
    explicit NonHermitianInput(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateSpectrum : std::runtime_error {
    explicit DegenerateSpectrum(const std::string& what) : std::runtime_error(what) {}
};

struct BadRange : std::runtime_error {
    explicit BadRange(const std::string& what) : std::runtime_error(what) {}
};

struct OutOfWindow : std::runtime_error {
    explicit OutOfWindow(const std::string& what) : std::runtime_error(what) {}
};

struct StepTooLarge : std::runtime_error {
    explicit StepTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct NormDrift : std::runtime_error {
    explicit NormDrift(const std::string& what) : std::runtime_error(what) {}
};

struct PositivityLoss : std::runtime_error {
    explicit PositivityLoss(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

struct SchemaMismatch : std::runtime_error {
    explicit SchemaMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct BadFractions : std::runtime_error {
    explicit BadFractions(const std::string& what) : std::runtime_error(what) {}
};

struct Divergence : std::runtime_error {
    explicit Divergence(const std::string& what) : std::runtime_error(what) {}
};

struct EmptySplit : std::runtime_error {
    explicit EmptySplit(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsense
