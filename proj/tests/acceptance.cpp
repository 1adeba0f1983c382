// Acceptance runner: executes every acceptance criterion end to end and
// prints one PASS/FAIL line per criterion. Exits nonzero when any fails.
//
// The heavy criterion (the desk-scale dataset reproduction) generates
// 5 x 500 points at N = 200 realizations each, which is on the order of
// 10^6 single solves; expect a couple of hours on one core.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qsense/config.hpp"
#include "qsense/control.hpp"
#include "qsense/dataset.hpp"
#include "qsense/dynamics.hpp"
#include "qsense/linalg.hpp"
#include "qsense/mlp.hpp"
#include "qsense/model.hpp"
#include "qsense/noise.hpp"
#include "qsense/rng.hpp"

using namespace qsense;

namespace {

int g_failures = 0;

void report(int idx, const std::string& what, bool pass, const std::string& detail) {
    std::printf("[%d] %-44s %s  (%s)\n", idx, what.c_str(), pass ? "PASS" : "FAIL",
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

constexpr double kXiFree = 0.9472135954999578;  // |<ee|1>|^2 at epsilon = g

}  // namespace

int main() {
    const RunConfig cfg;  // frozen defaults
    const SystemParams sys = cfg.physical;
    const EigenFrame frame = build_eigenframe(sys);
    const DriveSpec drives[3] = {
        make_protocol(DrivingCondition::CondI, cfg.pulses, frame),
        make_protocol(DrivingCondition::CondII, cfg.pulses, frame),
        make_protocol(DrivingCondition::CondIII, cfg.pulses, frame),
    };

    // ---- 1 & 2: noise-free transfer under the symmetric drive ----
    {
        const RunResult r = propagate_quasistatic(sys, drives[0], {0.0, 0.0}, cfg.integrator);
        char buf[128];
        std::snprintf(buf, sizeof buf, "max P3 = %.3e", r.max_p3);
        report(1, "noise-free selection rule (max P3 < 1e-6)", r.max_p3 < 1e-6, buf);
        const double rel = std::abs(r.xi - kXiFree) / kXiFree;
        std::snprintf(buf, sizeof buf, "P1 = %.6f, xi = %.6f, rel dev = %.4f",
                      r.populations(1), r.xi, rel);
        report(2, "noise-free transfer (P1 >= 0.99, xi within 1%)",
               r.populations(1) >= 0.99 && rel <= 0.01, buf);
    }

    // ---- 3: rotating vs lab backend cross-validation ----
    {
        IntegratorConfig lab;
        lab.backend = Backend::LabFrame;
        lab.dt = 0.04;
        const QuasistaticRealization reals[2] = {{0.0, 0.0}, {0.1, -0.05}};
        double worst = 0.0;
        int n_cfg = 0;
        for (const DriveSpec& d : drives) {
            for (const QuasistaticRealization& re : reals) {
                const RunResult a = propagate_quasistatic(sys, d, re, cfg.integrator);
                const RunResult b = propagate_quasistatic(sys, d, re, lab);
                const double diff = (a.populations - b.populations).cwiseAbs().maxCoeff();
                worst = std::max(worst, diff);
                ++n_cfg;
            }
        }
        char buf[128];
        std::snprintf(buf, sizeof buf, "%d configs, worst population diff = %.2e", n_cfg, worst);
        report(3, "rotating vs lab backends agree (<= 1e-2)", worst <= 1e-2, buf);
    }

    // ---- 4: trajectory average vs deterministic Lindblad ----
    {
        double worst = 0.0;
        for (int sign : {+1, -1}) {
            const MarkovSpec spec{0.005, sign};
            const RunResult lind = propagate_lindblad(sys, drives[0], spec, cfg.integrator);
            const RunResult traj =
                propagate_trajectories(sys, drives[0], spec, 1000, cfg.integrator, 424242);
            worst = std::max(worst, trace_distance(lind.final_state, traj.final_state));
        }
        char buf[128];
        std::snprintf(buf, sizeof buf, "worst trace distance = %.4f over both signs", worst);
        report(4, "trajectories (m=1000) vs Lindblad (<= 0.02)", worst <= 0.02, buf);
    }

    // ---- 5: invariants + step-halving on randomized configurations ----
    {
        IntegratorConfig half = cfg.integrator;
        half.dt = cfg.integrator.dt / 2.0;
        RngStream rng(derive_seed(20260826, 5));
        double worst_xi = 0.0, worst_sum = 0.0;
        bool in_range = true;
        for (int k = 0; k < 100; ++k) {
            const int cond = static_cast<int>(rng.uniform() * 3.0);
            const QuasistaticRealization re{0.3 * (2.0 * rng.uniform() - 1.0),
                                            0.3 * (2.0 * rng.uniform() - 1.0)};
            const RunResult a = propagate_quasistatic(sys, drives[cond], re, cfg.integrator);
            const RunResult b = propagate_quasistatic(sys, drives[cond], re, half);
            worst_xi = std::max(worst_xi, std::abs(a.xi - b.xi));
            worst_sum = std::max(worst_sum, std::abs(a.populations.sum() - 1.0));
            if (a.populations.minCoeff() < -1e-9 || a.populations.maxCoeff() > 1.0 + 1e-9)
                in_range = false;
        }
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "100 configs: max |dxi| halving = %.2e, max |sum P - 1| = %.2e",
                      worst_xi, worst_sum);
        report(5, "invariants + dt-halving stability (< 1e-6)",
               worst_xi < 1e-6 && worst_sum < 1e-9 && in_range, buf);
    }

    // ---- 6: correlated noise respects the selection rule, anticorrelated breaks it ----
    {
        RngStream rng(derive_seed(20260826, 6));
        double worst_p3_corr = 0.0;
        for (int k = 0; k < 20; ++k) {
            const double delta = 0.1 * rng.normal();
            const RunResult r =
                propagate_quasistatic(sys, drives[0], {delta, delta}, cfg.integrator);
            worst_p3_corr = std::max(worst_p3_corr, r.max_p3);
        }
        const RunResult anti =
            propagate_quasistatic(sys, drives[0], {0.3, -0.3}, cfg.integrator);
        char buf[160];
        std::snprintf(buf, sizeof buf, "corr max P3 = %.2e, anti max P3 = %.2e",
                      worst_p3_corr, anti.max_p3);
        report(6, "symmetry: corr P3 < 1e-6, anti P3 > 1e-3",
               worst_p3_corr < 1e-6 && anti.max_p3 > 1e-3, buf);
    }

    // ---- desk-scale dataset (shared by criteria 7 and 8) ----
    std::printf("... generating the desk-scale dataset (%d points/class, N = %d); "
                "this is the long step\n",
                cfg.per_class, cfg.n_realizations);
    std::fflush(stdout);
    const Dataset data = generate_dataset(cfg.generation());
    const DataSplit parts = split(data, cfg.fractions, cfg.split_seed);

    // ---- 7: classifier gradients and early training behaviour ----
    {
        const LabeledData& tr = parts.train;
        std::vector<int> sizes{3};
        for (int h : cfg.classifier.hidden) sizes.push_back(h);
        sizes.push_back(kNumNoiseClasses);
        const MlpModel probe(sizes, cfg.init_seed);
        const double gerr = gradient_check(probe, tr.x.topRows(64), tr.y.head(64), 7, 200);

        MlpHyperparams short_hp = cfg.classifier;
        short_hp.epochs = 10;
        short_hp.patience = 20;
        auto [m10, rep10] = train(cfg.init_seed, tr, parts.validation, short_hp);
        bool monotone = true;
        for (std::size_t e = 1; e < rep10.train_loss.size(); ++e)
            if (rep10.train_loss[e] >= rep10.train_loss[e - 1]) monotone = false;
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "max grad rel err = %.2e, loss %.4f -> %.4f over %zu epochs", gerr,
                      rep10.train_loss.front(), rep10.train_loss.back(),
                      rep10.train_loss.size());
        report(7, "gradient check (< 1e-5) + monotone early loss",
               gerr < 1e-5 && monotone && rep10.train_loss.size() == 10, buf);
    }

    // ---- 8: accuracy structure of the full reproduction ----
    {
        auto [model, rep] = train(cfg.init_seed, parts.train, parts.validation,
                                  cfg.classifier);
        const EvalResult ev = evaluate(model, parts.test);
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "5-class %.4f, NM-vs-MK %.4f, within-NM %.4f, within-MK %.4f",
                      ev.accuracy, ev.nm_vs_mk, ev.within_nm, ev.within_mk);
        const bool pass = ev.accuracy >= 0.85 && ev.nm_vs_mk >= 0.95 &&
                          ev.within_nm >= 0.95 && ev.within_mk >= 0.70 &&
                          ev.within_mk < ev.within_nm;
        report(8, "desk-scale accuracy structure", pass, buf);
    }

    // ---- 9: bitwise reproducibility of data generation and training ----
    {
        GenerationConfig small = cfg.generation();
        small.per_class = 10;
        small.n_realizations = 5;
        small.master_seed = 99;
        const std::filesystem::path dir =
            std::filesystem::temp_directory_path() / "qsense_acceptance";
        std::filesystem::create_directories(dir);
        const std::string csv_a = (dir / "a.csv").string();
        const std::string csv_b = (dir / "b.csv").string();
        save_csv(generate_dataset(small), csv_a);
        save_csv(generate_dataset(small), csv_b);
        const bool csv_same = read_file(csv_a) == read_file(csv_b) &&
                              !read_file(csv_a).empty();

        const Dataset d = load_csv(csv_a);
        const DataSplit s = split(d, cfg.fractions, cfg.split_seed);
        MlpHyperparams hp = cfg.classifier;
        hp.epochs = 20;
        const std::string mod_a = (dir / "a.json").string();
        const std::string mod_b = (dir / "b.json").string();
        save_model(train(cfg.init_seed, s.train, s.validation, hp).first, mod_a, "tag");
        save_model(train(cfg.init_seed, s.train, s.validation, hp).first, mod_b, "tag");
        const bool model_same = read_file(mod_a) == read_file(mod_b) &&
                                !read_file(mod_a).empty();
        char buf[128];
        std::snprintf(buf, sizeof buf, "csv identical: %s, model identical: %s",
                      csv_same ? "yes" : "no", model_same ? "yes" : "no");
        report(9, "bitwise reproducibility (gen-data, train)", csv_same && model_same, buf);
        std::filesystem::remove_all(dir);
    }

    if (g_failures != 0) {
        std::printf("%d acceptance criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
