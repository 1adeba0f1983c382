#include "qsense/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "qsense/errors.hpp"
#include "qsense/rng.hpp"

namespace qsense {

namespace {

using nlohmann::json;

/// Row-wise softmax, shifted by the row max for stability.
Eigen::MatrixXd softmax(const Eigen::MatrixXd& z) {
    Eigen::MatrixXd p = z;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        const double m = p.row(i).maxCoeff();
        p.row(i) = (p.row(i).array() - m).exp();
        p.row(i) /= p.row(i).sum();
    }
    return p;
}

/// Fisher-Yates shuffle driven by an RngStream.
void shuffle_indices(std::vector<Eigen::Index>& idx, RngStream& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
        std::swap(idx[i - 1], idx[std::min(j, i - 1)]);
    }
}

double accuracy_of(const MlpModel& m, const LabeledData& d) {
    if (d.size() == 0) return 0.0;
    const Eigen::VectorXi pred = m.predict(d.x);
    long hit = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) hit += pred(i) == d.y(i);
    return static_cast<double>(hit) / static_cast<double>(d.size());
}

}  // namespace

LabeledData to_labeled(const Dataset& d) {
    LabeledData out;
    out.x.resize(static_cast<Eigen::Index>(d.rows.size()), 3);
    out.y.resize(static_cast<Eigen::Index>(d.rows.size()));
    for (std::size_t i = 0; i < d.rows.size(); ++i) {
        for (int k = 0; k < 3; ++k)
            out.x(static_cast<Eigen::Index>(i), k) = d.rows[i].xi[static_cast<std::size_t>(k)];
        out.y(static_cast<Eigen::Index>(i)) = d.rows[i].label;
    }
    return out;
}

void SplitFractions::validate() const {
    if (!(train > 0.0) || !(validation > 0.0) || !(test > 0.0))
        throw BadFractions("split: fractions must be positive");
    if (std::abs(train + validation + test - 1.0) > 1e-9)
        throw BadFractions("split: fractions must sum to 1");
}

DataSplit split(const Dataset& d, const SplitFractions& f, std::uint64_t seed) {
    f.validate();
    const LabeledData all = to_labeled(d);
    std::vector<Eigen::Index> tr, va, te;
    for (int label = 0; label < kNumNoiseClasses; ++label) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index i = 0; i < all.size(); ++i)
            if (all.y(i) == label) idx.push_back(i);
        RngStream rng(derive_seed(seed, static_cast<std::uint64_t>(label)));
        shuffle_indices(idx, rng);
        const std::size_t n = idx.size();
        const std::size_t n_tr = static_cast<std::size_t>(f.train * static_cast<double>(n));
        const std::size_t n_va = static_cast<std::size_t>(f.validation * static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (i < n_tr)
                tr.push_back(idx[i]);
            else if (i < n_tr + n_va)
                va.push_back(idx[i]);
            else
                te.push_back(idx[i]);
        }
    }
    auto take = [&](const std::vector<Eigen::Index>& rows) {
        LabeledData out;
        out.x.resize(static_cast<Eigen::Index>(rows.size()), all.x.cols());
        out.y.resize(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            out.x.row(static_cast<Eigen::Index>(i)) = all.x.row(rows[i]);
            out.y(static_cast<Eigen::Index>(i)) = all.y(rows[i]);
        }
        return out;
    };
    return {take(tr), take(va), take(te)};
}

void MlpHyperparams::validate() const {
    if (hidden.empty()) throw BadRange("MlpHyperparams: need at least one hidden layer");
    for (int h : hidden)
        if (h < 1) throw BadRange("MlpHyperparams: hidden sizes must be >= 1");
    if (!(learning_rate > 0.0)) throw BadRange("MlpHyperparams: learning_rate must be > 0");
    if (batch_size < 1) throw BadRange("MlpHyperparams: batch_size must be >= 1");
    if (epochs < 1) throw BadRange("MlpHyperparams: epochs must be >= 1");
    if (patience < 1) throw BadRange("MlpHyperparams: patience must be >= 1");
}

Eigen::MatrixXd Normalizer::apply(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd out = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j)
        out.col(j) = (x.col(j).array() - mean(j)) / stddev(j);
    return out;
}

MlpModel::MlpModel(const std::vector<int>& sizes, std::uint64_t init_seed) : sizes_(sizes) {
    if (sizes.size() < 2) throw BadRange("MlpModel: need at least input and output layers");
    RngStream rng(init_seed);
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        const int fan_in = sizes[l], fan_out = sizes[l + 1];
        const double scale = std::sqrt(2.0 / fan_in);
        Eigen::MatrixXd w(fan_out, fan_in);
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < w.cols(); ++j) w(i, j) = scale * rng.normal();
        w_.push_back(std::move(w));
        b_.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    norm_.mean = Eigen::VectorXd::Zero(sizes.front());
    norm_.stddev = Eigen::VectorXd::Ones(sizes.front());
}

Eigen::MatrixXd MlpModel::predict_proba(const Eigen::MatrixXd& x) const {
    Eigen::MatrixXd a = norm_.apply(x);
    for (std::size_t l = 0; l < w_.size(); ++l) {
        a = (a * w_[l].transpose()).rowwise() + b_[l].transpose();
        if (l + 1 < w_.size()) a = a.cwiseMax(0.0);
    }
    return softmax(a);
}

Eigen::VectorXi MlpModel::predict(const Eigen::MatrixXd& x) const {
    const Eigen::MatrixXd p = predict_proba(x);
    Eigen::VectorXi out(p.rows());
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        Eigen::Index k;
        p.row(i).maxCoeff(&k);
        out(i) = static_cast<int>(k);
    }
    return out;
}

MlpModel::BatchGrad MlpModel::loss_and_gradients(const Eigen::MatrixXd& x_norm,
                                                 const Eigen::VectorXi& y) const {
    const Eigen::Index n = x_norm.rows();
    if (n == 0) throw EmptySplit("loss_and_gradients: empty batch");
    std::vector<Eigen::MatrixXd> act;  // post-activation per layer
    act.push_back(x_norm);
    for (std::size_t l = 0; l < w_.size(); ++l) {
        Eigen::MatrixXd z = (act.back() * w_[l].transpose()).rowwise() + b_[l].transpose();
        if (l + 1 < w_.size()) z = z.cwiseMax(0.0);
        act.push_back(std::move(z));
    }
    const Eigen::MatrixXd p = softmax(act.back());

    BatchGrad g;
    g.loss = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        g.loss -= std::log(std::max(p(i, y(i)), 1e-300));
    g.loss /= static_cast<double>(n);

    // delta at the output: (p - onehot) / n.
    Eigen::MatrixXd delta = p;
    for (Eigen::Index i = 0; i < n; ++i) delta(i, y(i)) -= 1.0;
    delta /= static_cast<double>(n);

    g.dw.resize(w_.size());
    g.db.resize(w_.size());
    for (std::size_t l = w_.size(); l-- > 0;) {
        g.dw[l] = delta.transpose() * act[l];
        g.db[l] = delta.colwise().sum().transpose();
        if (l > 0) {
            delta = delta * w_[l];
            delta = delta.cwiseProduct((act[l].array() > 0.0).cast<double>().matrix());
        }
    }
    return g;
}

std::pair<MlpModel, TrainReport> train(std::uint64_t init_seed, const LabeledData& train_split,
                                       const LabeledData& val_split, const MlpHyperparams& hp) {
    hp.validate();
    if (train_split.size() == 0 || val_split.size() == 0)
        throw EmptySplit("train: empty train or validation split");

    std::vector<int> sizes;
    sizes.push_back(static_cast<int>(train_split.x.cols()));
    for (int h : hp.hidden) sizes.push_back(h);
    int n_classes = 0;
    for (Eigen::Index i = 0; i < train_split.size(); ++i)
        n_classes = std::max(n_classes, train_split.y(i) + 1);
    sizes.push_back(std::max(n_classes, 2));

    MlpModel model(sizes, derive_seed(init_seed, 0));
    // Normalizer from the training split only.
    Normalizer& norm = model.normalizer();
    norm.mean = train_split.x.colwise().mean();
    norm.stddev.resize(train_split.x.cols());
    for (Eigen::Index j = 0; j < train_split.x.cols(); ++j) {
        const double var =
            (train_split.x.col(j).array() - norm.mean(j)).square().sum() /
            static_cast<double>(train_split.size());
        norm.stddev(j) = std::max(std::sqrt(var), 1e-12);
    }
    const Eigen::MatrixXd x_norm = norm.apply(train_split.x);

    // Adam state.
    const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    std::vector<Eigen::MatrixXd> mw, vw;
    std::vector<Eigen::VectorXd> mb, vb;
    for (const auto& w : model.weights()) {
        mw.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        vw.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    for (const auto& b : model.biases()) {
        mb.push_back(Eigen::VectorXd::Zero(b.size()));
        vb.push_back(Eigen::VectorXd::Zero(b.size()));
    }

    TrainReport report;
    MlpModel best = model;
    double best_val = -1.0;
    int since_best = 0;
    long step = 0;
    std::vector<Eigen::Index> order(static_cast<std::size_t>(train_split.size()));
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < hp.epochs; ++epoch) {
        RngStream rng(derive_seed(init_seed, 1, static_cast<std::uint64_t>(epoch)));
        shuffle_indices(order, rng);
        double epoch_loss = 0.0;
        long n_batches = 0;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(hp.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(hp.batch_size));
            const Eigen::Index bn = static_cast<Eigen::Index>(stop - start);
            Eigen::MatrixXd bx(bn, x_norm.cols());
            Eigen::VectorXi by(bn);
            for (Eigen::Index i = 0; i < bn; ++i) {
                bx.row(i) = x_norm.row(order[start + static_cast<std::size_t>(i)]);
                by(i) = train_split.y(order[start + static_cast<std::size_t>(i)]);
            }
            const auto g = model.loss_and_gradients(bx, by);
            if (!std::isfinite(g.loss)) throw Divergence("train: loss became non-finite");
            epoch_loss += g.loss;
            ++n_batches;
            ++step;
            const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            for (std::size_t l = 0; l < model.weights().size(); ++l) {
                mw[l] = beta1 * mw[l] + (1.0 - beta1) * g.dw[l];
                vw[l] = beta2 * vw[l] + (1.0 - beta2) * g.dw[l].cwiseProduct(g.dw[l]);
                model.weights()[l] -=
                    (hp.learning_rate * (mw[l] / bc1).array() /
                     ((vw[l] / bc2).array().sqrt() + eps))
                        .matrix();
                mb[l] = beta1 * mb[l] + (1.0 - beta1) * g.db[l];
                vb[l] = beta2 * vb[l] + (1.0 - beta2) * g.db[l].cwiseProduct(g.db[l]);
                model.biases()[l] -=
                    (hp.learning_rate * (mb[l] / bc1).array() /
                     ((vb[l] / bc2).array().sqrt() + eps))
                        .matrix();
            }
        }
        report.train_loss.push_back(epoch_loss / static_cast<double>(n_batches));
        report.train_accuracy.push_back(accuracy_of(model, train_split));
        const double val_acc = accuracy_of(model, val_split);
        report.val_accuracy.push_back(val_acc);
        if (val_acc > best_val) {
            best_val = val_acc;
            best = model;
            report.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= hp.patience) {
            break;
        }
    }
    return {std::move(best), std::move(report)};
}

double gradient_check(const MlpModel& model, const Eigen::MatrixXd& x,
                      const Eigen::VectorXi& y, std::uint64_t seed, int min_params) {
    if (x.rows() == 0) throw EmptySplit("gradient_check: empty batch");
    const Eigen::MatrixXd x_norm = model.normalizer().apply(x);
    const auto analytic = model.loss_and_gradients(x_norm, y);

    MlpModel probe = model;
    const double h = 1e-5;
    RngStream rng(seed);
    double max_rel = 0.0;
    auto deflect = [&](double* p, double ga) {
        const double orig = *p;
        *p = orig + h;
        const double up = probe.loss_and_gradients(x_norm, y).loss;
        *p = orig - h;
        const double dn = probe.loss_and_gradients(x_norm, y).loss;
        *p = orig;
        const double gn = (up - dn) / (2.0 * h);
        const double denom = std::max({std::abs(ga), std::abs(gn), 1e-8});
        max_rel = std::max(max_rel, std::abs(ga - gn) / denom);
    };
    long n_params = 0;
    for (const auto& w : model.weights()) n_params += w.size();
    for (const auto& b : model.biases()) n_params += b.size();
    const int n_check = static_cast<int>(std::min<long>(n_params, min_params));
    for (int c = 0; c < n_check; ++c) {
        long k = static_cast<long>(rng.uniform() * static_cast<double>(n_params));
        k = std::min(k, n_params - 1);
        long off = k;
        for (std::size_t l = 0; l < probe.weights().size(); ++l) {
            if (off < probe.weights()[l].size()) {
                deflect(probe.weights()[l].data() + off, analytic.dw[l](off));
                off = -1;
                break;
            }
            off -= probe.weights()[l].size();
        }
        if (off < 0) continue;
        for (std::size_t l = 0; l < probe.biases().size(); ++l) {
            if (off < probe.biases()[l].size()) {
                deflect(probe.biases()[l].data() + off, analytic.db[l](off));
                break;
            }
            off -= probe.biases()[l].size();
        }
    }
    return max_rel;
}

long ConfusionMatrix::total() const {
    long t = 0;
    for (const auto& row : counts)
        for (long v : row) t += v;
    return t;
}

long ConfusionMatrix::diagonal() const {
    long t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

EvalResult evaluate(const MlpModel& model, const LabeledData& test_split) {
    if (test_split.size() == 0) throw EmptySplit("evaluate: empty test split");
    const Eigen::VectorXi pred = model.predict(test_split.x);
    EvalResult r;
    long nm_rows = 0, nm_hits = 0, mk_rows = 0, mk_hits = 0, bin_hits = 0;
    for (Eigen::Index i = 0; i < test_split.size(); ++i) {
        const int t = test_split.y(i), p = pred(i);
        r.cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] += 1;
        const bool t_mk = t >= 3, p_mk = p >= 3;
        bin_hits += t_mk == p_mk;
        if (!t_mk) {
            ++nm_rows;
            nm_hits += t == p;
        } else {
            ++mk_rows;
            mk_hits += t == p;
        }
    }
    const double n = static_cast<double>(test_split.size());
    r.accuracy = static_cast<double>(r.cm.diagonal()) / n;
    r.nm_vs_mk = static_cast<double>(bin_hits) / n;
    r.within_nm = nm_rows ? static_cast<double>(nm_hits) / static_cast<double>(nm_rows) : 0.0;
    r.within_mk = mk_rows ? static_cast<double>(mk_hits) / static_cast<double>(mk_rows) : 0.0;
    return r;
}

void save_model(const MlpModel& m, const std::string& path, const std::string& config_tag) {
    json doc;
    doc["schema"] = "qsense-mlp-v1";
    doc["config_tag"] = config_tag;
    doc["sizes"] = m.sizes();
    doc["normalizer"]["mean"] = std::vector<double>(
        m.normalizer().mean.data(), m.normalizer().mean.data() + m.normalizer().mean.size());
    doc["normalizer"]["stddev"] =
        std::vector<double>(m.normalizer().stddev.data(),
                            m.normalizer().stddev.data() + m.normalizer().stddev.size());
    json layers = json::array();
    for (std::size_t l = 0; l < m.weights().size(); ++l) {
        json layer;
        std::vector<double> w;  // row-major
        const auto& wm = m.weights()[l];
        for (Eigen::Index i = 0; i < wm.rows(); ++i)
            for (Eigen::Index j = 0; j < wm.cols(); ++j) w.push_back(wm(i, j));
        layer["weights"] = w;
        layer["bias"] = std::vector<double>(m.biases()[l].data(),
                                            m.biases()[l].data() + m.biases()[l].size());
        layers.push_back(std::move(layer));
    }
    doc["layers"] = std::move(layers);

    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw IoError("save_model: cannot open " + tmp);
        f << doc.dump(2) << "\n";
        if (!f) throw IoError("save_model: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("save_model: rename to " + path + " failed");
}

MlpModel load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("load_model: cannot open " + path);
    json doc;
    try {
        f >> doc;
    } catch (const std::exception& e) {
        throw SchemaMismatch(std::string("load_model: invalid JSON: ") + e.what());
    }
    try {
        if (doc.at("schema").get<std::string>() != "qsense-mlp-v1")
            throw SchemaMismatch("load_model: unknown schema tag");
        const std::vector<int> sizes = doc.at("sizes").get<std::vector<int>>();
        if (sizes.size() < 2) throw SchemaMismatch("load_model: fewer than two layers");
        MlpModel m(sizes, 0);
        const auto mean = doc.at("normalizer").at("mean").get<std::vector<double>>();
        const auto sd = doc.at("normalizer").at("stddev").get<std::vector<double>>();
        if (mean.size() != static_cast<std::size_t>(sizes.front()) || sd.size() != mean.size())
            throw SchemaMismatch("load_model: normalizer size mismatch");
        m.normalizer().mean =
            Eigen::Map<const Eigen::VectorXd>(mean.data(), static_cast<Eigen::Index>(mean.size()));
        m.normalizer().stddev =
            Eigen::Map<const Eigen::VectorXd>(sd.data(), static_cast<Eigen::Index>(sd.size()));
        const auto& layers = doc.at("layers");
        if (layers.size() != sizes.size() - 1)
            throw SchemaMismatch("load_model: layer count mismatch");
        for (std::size_t l = 0; l < layers.size(); ++l) {
            const auto w = layers[l].at("weights").get<std::vector<double>>();
            const auto b = layers[l].at("bias").get<std::vector<double>>();
            const Eigen::Index rows = sizes[l + 1], cols = sizes[l];
            if (w.size() != static_cast<std::size_t>(rows * cols) ||
                b.size() != static_cast<std::size_t>(rows))
                throw SchemaMismatch("load_model: layer dimension mismatch");
            for (Eigen::Index i = 0; i < rows; ++i)
                for (Eigen::Index j = 0; j < cols; ++j)
                    m.weights()[l](i, j) = w[static_cast<std::size_t>(i * cols + j)];
            m.biases()[l] =
                Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
        }
        return m;
    } catch (const SchemaMismatch&) {
        throw;
    } catch (const std::exception& e) {
        throw SchemaMismatch(std::string("load_model: missing or malformed field: ") + e.what());
    }
}

}  // namespace qsense
