#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsense/dataset.hpp"

namespace qsense {

/// A labeled design matrix: one row per point, columns (xi_i, xi_ii, xi_iii).
struct LabeledData {
    Eigen::MatrixXd x;
    Eigen::VectorXi y;

    Eigen::Index size() const { return x.rows(); }
};

/// Extracts features/labels from dataset rows in order.
LabeledData to_labeled(const Dataset& d);

struct SplitFractions {
    double train = 0.7;
    double validation = 0.15;
    double test = 0.15;

    void validate() const;  // positive, sum to 1
};

struct DataSplit {
    LabeledData train;
    LabeledData validation;
    LabeledData test;
};

/// Stratified split: within each label, rows are shuffled with a stream
/// seeded by derive_seed(seed, label) and dealt train-first. Deterministic
/// given seed; splits are disjoint and exhaustive.
DataSplit split(const Dataset& d, const SplitFractions& f, std::uint64_t seed);

struct MlpHyperparams {
    std::vector<int> hidden{32, 32};
    double learning_rate = 1e-3;
    int batch_size = 32;
    int epochs = 300;
    int patience = 50;

    void validate() const;
};

/// Per-feature z-score statistics, computed from the training split only.
struct Normalizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;  // floored at 1e-12

    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

/// Feed-forward network, rectifier hidden activations, softmax output,
/// float64 throughout.
class MlpModel {
  public:
    MlpModel() = default;
    /// He-initialized network of the given layer sizes (first = input dim,
    /// last = number of classes).
    MlpModel(const std::vector<int>& sizes, std::uint64_t init_seed);

    const std::vector<int>& sizes() const { return sizes_; }
    Normalizer& normalizer() { return norm_; }
    const Normalizer& normalizer() const { return norm_; }

    /// Softmax class probabilities, one row per input row (rows sum to 1
    /// within 1e-6 for finite inputs). Applies the normalizer.
    Eigen::MatrixXd predict_proba(const Eigen::MatrixXd& x) const;
    Eigen::VectorXi predict(const Eigen::MatrixXd& x) const;

    /// Mean sparse categorical cross-entropy of a (already normalized)
    /// batch plus the analytic parameter gradients, backpropagated.
    struct BatchGrad {
        double loss = 0.0;
        std::vector<Eigen::MatrixXd> dw;
        std::vector<Eigen::VectorXd> db;
    };
    BatchGrad loss_and_gradients(const Eigen::MatrixXd& x_norm,
                                 const Eigen::VectorXi& y) const;

    std::vector<Eigen::MatrixXd>& weights() { return w_; }
    std::vector<Eigen::VectorXd>& biases() { return b_; }
    const std::vector<Eigen::MatrixXd>& weights() const { return w_; }
    const std::vector<Eigen::VectorXd>& biases() const { return b_; }

  private:
    std::vector<int> sizes_;
    std::vector<Eigen::MatrixXd> w_;  // w_[l]: sizes[l+1] x sizes[l]
    std::vector<Eigen::VectorXd> b_;
    Normalizer norm_;
};

struct TrainReport {
    std::vector<double> train_accuracy;  // per epoch
    std::vector<double> val_accuracy;
    std::vector<double> train_loss;
    int best_epoch = 0;
    double test_accuracy = -1.0;  // filled by the caller after evaluate
};

/// Mini-batch gradient descent with adaptive moments (Adam) on the sparse
/// categorical cross-entropy. The normalizer is fitted on `train` only.
/// Early-stops when validation accuracy has not improved for
/// `hp.patience` epochs; the returned model is the best-validation
/// snapshot. Deterministic given seeds. Throws Divergence if the loss
/// becomes non-finite.
std::pair<MlpModel, TrainReport> train(std::uint64_t init_seed, const LabeledData& train_split,
                                       const LabeledData& val_split,
                                       const MlpHyperparams& hp);

/// Compares analytic gradients with central finite differences (step 1e-5)
/// on at least min_params randomly chosen parameters; returns the max
/// relative error.
double gradient_check(const MlpModel& model, const Eigen::MatrixXd& x,
                      const Eigen::VectorXi& y, std::uint64_t seed, int min_params = 100);

struct ConfusionMatrix {
    std::array<std::array<long, 5>, 5> counts{};  // rows true, columns predicted

    long total() const;
    long diagonal() const;
};

struct EvalResult {
    double accuracy = 0.0;
    ConfusionMatrix cm;
    double nm_vs_mk = 0.0;    // binary accuracy after collapsing {0,1,2} / {3,4}
    double within_nm = 0.0;   // exact-label accuracy restricted to true-NM rows
    double within_mk = 0.0;   // exact-label accuracy restricted to true-MK rows
};

EvalResult evaluate(const MlpModel& model, const LabeledData& test_split);

/// JSON model serialization: layer sizes, row-major weights and biases,
/// normalizer statistics, and a config tag. load_model throws
/// SchemaMismatch on malformed documents.
void save_model(const MlpModel& m, const std::string& path, const std::string& config_tag);
MlpModel load_model(const std::string& path);

}  // namespace qsense
