#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qsense/mlp.hpp"

using namespace qsense;

namespace {

/// Balanced synthetic dataset with per-class Gaussian feature blobs.
Dataset make_blobs(int per_class, int n_classes, double spread, std::uint64_t seed) {
    Dataset d;
    RngStream rng(seed);
    for (int c = 0; c < n_classes; ++c) {
        for (int i = 0; i < per_class; ++i) {
            FeatureVector fv;
            for (int k = 0; k < 3; ++k)
                fv.xi[static_cast<std::size_t>(k)] =
                    0.1 + 0.15 * c + spread * rng.normal();
            fv.label = c;
            fv.param_name = "sigma";
            fv.param_value = 0.1;
            d.rows.push_back(fv);
        }
    }
    return d;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("split arithmetic: 2500 rows at 70/15/15 -> 1750/375/375, stratified") {
    const Dataset d = make_blobs(500, 5, 0.01, 1);
    const DataSplit s = split(d, SplitFractions{}, 7);
    CHECK(s.train.size() == 1750);
    CHECK(s.validation.size() == 375);
    CHECK(s.test.size() == 375);
    // Stratification: 350/75/75 per class.
    for (int c = 0; c < 5; ++c) {
        CHECK((s.train.y.array() == c).count() == 350);
        CHECK((s.validation.y.array() == c).count() == 75);
        CHECK((s.test.y.array() == c).count() == 75);
    }
}

TEST_CASE("split is deterministic given the seed") {
    const Dataset d = make_blobs(40, 5, 0.01, 2);
    const DataSplit a = split(d, SplitFractions{}, 11);
    const DataSplit b = split(d, SplitFractions{}, 11);
    CHECK(a.train.x == b.train.x);
    CHECK(a.test.y == b.test.y);
    const DataSplit c = split(d, SplitFractions{}, 12);
    CHECK(a.train.x != c.train.x);
}

TEST_CASE("bad fractions are rejected") {
    const SplitFractions over{0.5, 0.5, 0.5};
    CHECK_THROWS_AS(over.validate(), BadFractions);
    const SplitFractions zero{0.0, 0.5, 0.5};
    CHECK_THROWS_AS(zero.validate(), BadFractions);
    const SplitFractions negative{-0.2, 0.6, 0.6};
    CHECK_THROWS_AS(negative.validate(), BadFractions);
    const SplitFractions good{0.7, 0.15, 0.15};
    CHECK_NOTHROW(good.validate());
}

TEST_CASE("single-class toy set reaches training accuracy 1.0 within 5 epochs") {
    const Dataset d = make_blobs(40, 1, 0.05, 3);
    const DataSplit s = split(d, SplitFractions{}, 5);
    MlpHyperparams hp;
    hp.epochs = 5;
    hp.learning_rate = 0.05;  // few rows -> few updates; converge quickly
    const auto [model, report] = train(1, s.train, s.validation, hp);
    REQUIRE(!report.train_accuracy.empty());
    CHECK(report.train_accuracy.back() == 1.0);
}

TEST_CASE("separable 2-class blobs reach test accuracy >= 0.99") {
    const Dataset d = make_blobs(120, 2, 0.01, 4);  // blob gap 0.15 >> spread
    const DataSplit s = split(d, SplitFractions{}, 6);
    MlpHyperparams hp;
    hp.epochs = 60;
    const auto [model, report] = train(2, s.train, s.validation, hp);
    const EvalResult ev = evaluate(model, s.test);
    CHECK(ev.accuracy >= 0.99);
}

TEST_CASE("training loss decreases on a learnable problem") {
    const Dataset d = make_blobs(100, 3, 0.02, 5);
    const DataSplit s = split(d, SplitFractions{}, 8);
    MlpHyperparams hp;
    hp.epochs = 10;
    const auto [model, report] = train(3, s.train, s.validation, hp);
    REQUIRE(report.train_loss.size() >= 10);
    CHECK(report.train_loss.back() < report.train_loss.front());
}

TEST_CASE("gradient check on a freshly initialized model") {
    const Dataset d = make_blobs(30, 5, 0.05, 6);
    const LabeledData data = to_labeled(d);
    MlpModel model({3, 32, 32, 5}, 17);
    CHECK(gradient_check(model, data.x, data.y, 99) < 1e-5);
}

TEST_CASE("zero-weight model: uniform softmax and closed-form bias gradient") {
    MlpModel model({3, 4, 5}, 17);
    for (auto& w : model.weights()) w.setZero();
    for (auto& b : model.biases()) b.setZero();
    model.normalizer().mean = Eigen::VectorXd::Zero(3);
    model.normalizer().stddev = Eigen::VectorXd::Ones(3);
    Eigen::MatrixXd x(2, 3);
    x << 0.3, 0.5, 0.7, 0.1, 0.2, 0.9;
    const Eigen::MatrixXd p = model.predict_proba(x);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 5; ++j) CHECK(p(i, j) == doctest::Approx(0.2).epsilon(1e-12));
    Eigen::VectorXi y(2);
    y << 1, 3;
    const auto grad = model.loss_and_gradients(x, y);
    // Output-layer bias gradient is (p - onehot) averaged over the batch.
    for (int j = 0; j < 5; ++j) {
        double expected = 0.0;
        for (int i = 0; i < 2; ++i) expected += (0.2 - (y(i) == j ? 1.0 : 0.0)) / 2.0;
        CHECK(grad.db.back()(j) == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(grad.loss == doctest::Approx(-std::log(0.2)).epsilon(1e-12));
}

TEST_CASE("gradient check still passes after a few training steps") {
    const Dataset d = make_blobs(60, 5, 0.05, 7);
    const DataSplit s = split(d, SplitFractions{}, 9);
    MlpHyperparams hp;
    hp.epochs = 3;
    const auto [model, report] = train(4, s.train, s.validation, hp);
    const Eigen::MatrixXd xn = model.normalizer().apply(s.train.x);
    CHECK(gradient_check(model, s.train.x, s.train.y, 101) < 1e-5);
}

TEST_CASE("softmax rows sum to 1 for large inputs") {
    MlpModel model({3, 8, 5}, 21);
    model.normalizer().mean = Eigen::VectorXd::Zero(3);
    model.normalizer().stddev = Eigen::VectorXd::Ones(3);
    Eigen::MatrixXd x(3, 3);
    x << 1e3, -1e3, 0.0, 50.0, 49.0, 48.0, 0.0, 0.0, 0.0;
    const Eigen::MatrixXd p = model.predict_proba(x);
    for (int i = 0; i < 3; ++i) {
        CHECK(std::abs(p.row(i).sum() - 1.0) < 1e-6);
        for (int j = 0; j < 5; ++j) CHECK(std::isfinite(p(i, j)));
    }
}

TEST_CASE("evaluate: hand-built perfect predictor") {
    // Features (label, 0, 0); linear scores K(2k x - k^2) peak at k = x.
    MlpModel model({3, 5}, 1);
    model.weights()[0].setZero();
    model.biases()[0].setZero();
    for (int k = 0; k < 5; ++k) {
        model.weights()[0](k, 0) = 20.0 * k;
        model.biases()[0](k) = -10.0 * k * k;
    }
    model.normalizer().mean = Eigen::VectorXd::Zero(3);
    model.normalizer().stddev = Eigen::VectorXd::Ones(3);
    LabeledData data;
    data.x = Eigen::MatrixXd::Zero(25, 3);
    data.y = Eigen::VectorXi(25);
    for (int i = 0; i < 25; ++i) {
        data.x(i, 0) = i % 5;
        data.y(i) = i % 5;
    }
    const EvalResult ev = evaluate(model, data);
    CHECK(ev.accuracy == 1.0);
    CHECK(ev.nm_vs_mk == 1.0);
    CHECK(ev.within_nm == 1.0);
    CHECK(ev.within_mk == 1.0);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            CHECK(ev.cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] ==
                  (i == j ? 5 : 0));
    CHECK(ev.cm.total() == 25);
    CHECK(ev.cm.diagonal() == 25);
}

TEST_CASE("evaluate: constant predictor on balanced 5-class data scores 0.2") {
    MlpModel model({3, 5}, 1);
    model.weights()[0].setZero();
    model.biases()[0].setZero();
    model.biases()[0](2) = 10.0;  // always predicts class 2
    model.normalizer().mean = Eigen::VectorXd::Zero(3);
    model.normalizer().stddev = Eigen::VectorXd::Ones(3);
    LabeledData data;
    data.x = Eigen::MatrixXd::Random(25, 3);
    data.y = Eigen::VectorXi(25);
    for (int i = 0; i < 25; ++i) data.y(i) = i % 5;
    const EvalResult ev = evaluate(model, data);
    CHECK(ev.accuracy == doctest::Approx(0.2));
    // Class 2 is non-Markovian, so all rows are predicted NM.
    CHECK(ev.nm_vs_mk == doctest::Approx(0.6));
    CHECK(ev.within_nm == doctest::Approx(1.0 / 3.0));
    CHECK(ev.within_mk == doctest::Approx(0.0));
}

TEST_CASE("collapsed binary accuracy is never below five-class accuracy") {
    const Dataset d = make_blobs(60, 5, 0.1, 8);
    const DataSplit s = split(d, SplitFractions{}, 10);
    MlpHyperparams hp;
    hp.epochs = 20;
    const auto [model, report] = train(5, s.train, s.validation, hp);
    const EvalResult ev = evaluate(model, s.test);
    CHECK(ev.nm_vs_mk >= ev.accuracy);
}

TEST_CASE("evaluate on an empty split raises EmptySplit") {
    MlpModel model({3, 5}, 1);
    model.normalizer().mean = Eigen::VectorXd::Zero(3);
    model.normalizer().stddev = Eigen::VectorXd::Ones(3);
    LabeledData empty;
    empty.x = Eigen::MatrixXd(0, 3);
    empty.y = Eigen::VectorXi(0);
    CHECK_THROWS_AS(evaluate(model, empty), EmptySplit);
}

TEST_CASE("training is deterministic given seeds") {
    const Dataset d = make_blobs(50, 3, 0.03, 9);
    const DataSplit s = split(d, SplitFractions{}, 13);
    MlpHyperparams hp;
    hp.epochs = 8;
    const auto [m1, r1] = train(6, s.train, s.validation, hp);
    const auto [m2, r2] = train(6, s.train, s.validation, hp);
    for (std::size_t l = 0; l < m1.weights().size(); ++l)
        CHECK(m1.weights()[l] == m2.weights()[l]);
    CHECK(r1.train_loss == r2.train_loss);
}

TEST_CASE("model JSON round-trip preserves predictions bit-for-bit") {
    const Dataset d = make_blobs(40, 5, 0.05, 10);
    const DataSplit s = split(d, SplitFractions{}, 14);
    MlpHyperparams hp;
    hp.epochs = 5;
    const auto [model, report] = train(7, s.train, s.validation, hp);
    save_model(model, "/tmp/qsense_test_model.json", "test");
    const MlpModel loaded = load_model("/tmp/qsense_test_model.json");
    CHECK(loaded.sizes() == model.sizes());
    const Eigen::MatrixXd pa = model.predict_proba(s.test.x);
    const Eigen::MatrixXd pb = loaded.predict_proba(s.test.x);
    CHECK(pa == pb);
}

TEST_CASE("malformed model JSON raises SchemaMismatch") {
    {
        std::ofstream out("/tmp/qsense_test_badmodel.json");
        out << "{\"format\": \"something-else\", \"sizes\": [3, 5]}";
    }
    CHECK_THROWS_AS(load_model("/tmp/qsense_test_badmodel.json"), SchemaMismatch);
    {
        std::ofstream out("/tmp/qsense_test_badmodel.json");
        out << "not json at all";
    }
    CHECK_THROWS_AS(load_model("/tmp/qsense_test_badmodel.json"), SchemaMismatch);
    CHECK_THROWS_AS(load_model("/tmp/qsense_missing_model.json"), IoError);
}

TEST_CASE("hyperparameter validation") {
    MlpHyperparams hp;
    hp.batch_size = 0;
    CHECK_THROWS(hp.validate());
    MlpHyperparams hp2;
    hp2.learning_rate = -1.0;
    CHECK_THROWS(hp2.validate());
    MlpHyperparams hp3;
    hp3.epochs = 0;
    CHECK_THROWS(hp3.validate());
}
