#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsense/config.hpp"
#include "qsense/dataset.hpp"
#include "qsense/dynamics.hpp"
#include "qsense/errors.hpp"
#include "qsense/mlp.hpp"
#include "qsense/svg.hpp"

namespace {

using namespace qsense;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitNumerical = 4;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> backend;
    std::optional<int> per_class;
};

RunConfig resolve_config(const CommonOpts& o) {
    RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.out_dir) cfg.output_dir = *o.out_dir;
    if (o.backend) {
        if (*o.backend == "rwa")
            cfg.integrator.backend = Backend::RotatingFrame;
        else if (*o.backend == "lab")
            cfg.integrator.backend = Backend::LabFrame;
        else
            throw ConfigError("--backend must be rwa or lab");
    }
    if (o.per_class) cfg.per_class = *o.per_class;
    cfg.validate();
    return cfg;
}

void ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    std::filesystem::create_directories(cfg.output_dir, ec);
    if (ec) throw IoError("cannot create output directory " + cfg.output_dir);
}

void write_text(const std::string& text, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw IoError("cannot open " + tmp);
        f << text;
        if (!f) throw IoError("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("rename to " + path + " failed");
}

DrivingCondition condition_from_string(const std::string& s) {
    if (s == "i") return DrivingCondition::CondI;
    if (s == "ii") return DrivingCondition::CondII;
    if (s == "iii") return DrivingCondition::CondIII;
    throw ConfigError("--condition must be i, ii or iii");
}

int cmd_simulate(const CommonOpts& common, const std::string& cls_name,
                 const std::string& cond_name, double delta1, double delta2, double gamma,
                 int stride) {
    const RunConfig cfg = resolve_config(common);
    ensure_out_dir(cfg);
    const DrivingCondition cond = condition_from_string(cond_name);
    const EigenFrame frame = build_eigenframe(cfg.physical);
    const DriveSpec drive = make_protocol(cond, cfg.pulses, frame);

    std::vector<TraceRow> trace;
    RunResult result;
    if (cls_name == "none" || cls_name == "qs_correlated" || cls_name == "qs_anticorrelated" ||
        cls_name == "qs_uncorrelated") {
        const QuasistaticRealization r{delta1, delta2};
        result = propagate_quasistatic_traced(cfg.physical, drive, r, cfg.integrator, stride,
                                              trace);
    } else if (cls_name == "mk_correlated" || cls_name == "mk_anticorrelated") {
        const MarkovSpec spec{gamma, cls_name == "mk_correlated" ? +1 : -1};
        result = propagate_lindblad_traced(cfg.physical, drive, spec, cfg.integrator, stride,
                                           trace);
    } else {
        throw ConfigError("--class must be none or a noise class name");
    }

    std::ostringstream csv;
    csv << "t,P0,P1,P2,P3,P_ee\n";
    for (const TraceRow& row : trace) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", row.t, row.p[0],
                      row.p[1], row.p[2], row.p[3], row.p_ee);
        csv << buf;
    }
    const std::string out = cfg.output_dir + "/trace.csv";
    write_text(csv.str(), out);

    std::printf("final populations (eigenbasis): P0=%.6f P1=%.6f P2=%.6f P3=%.6f\n",
                result.populations(0), result.populations(1), result.populations(2),
                result.populations(3));
    std::printf("transfer efficiency xi = %.6f, max P3 over run = %.3e\n", result.xi,
                result.max_p3);
    std::printf("trace written to %s (%zu rows)\n", out.c_str(), trace.size());
    return kExitOk;
}

int cmd_gen_data(const CommonOpts& common) {
    const RunConfig cfg = resolve_config(common);
    ensure_out_dir(cfg);
    const Dataset d = generate_dataset(cfg.generation());
    const std::string out = cfg.output_dir + "/dataset.csv";
    save_csv(d, out);
    std::printf("wrote %zu rows to %s\n", d.rows.size(), out.c_str());
    return kExitOk;
}

int cmd_train(const CommonOpts& common, const std::string& data_path) {
    const RunConfig cfg = resolve_config(common);
    ensure_out_dir(cfg);
    const Dataset d = load_csv(data_path);
    const DataSplit s = split(d, cfg.fractions, cfg.split_seed);
    auto [model, report] = train(cfg.init_seed, s.train, s.validation, cfg.classifier);
    const EvalResult ev = evaluate(model, s.test);
    report.test_accuracy = ev.accuracy;

    save_model(model, cfg.output_dir + "/model.json", dump_config(cfg));

    std::ostringstream curve;
    curve << "epoch,train_loss,train_accuracy,val_accuracy\n";
    for (std::size_t e = 0; e < report.train_accuracy.size(); ++e) {
        char buf[120];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", e, report.train_loss[e],
                      report.train_accuracy[e], report.val_accuracy[e]);
        curve << buf;
    }
    write_text(curve.str(), cfg.output_dir + "/train_report.csv");

    std::vector<double> epochs(report.train_accuracy.size());
    for (std::size_t e = 0; e < epochs.size(); ++e) epochs[e] = static_cast<double>(e);
    const std::string svg = render_line_plot(
        "training and validation accuracy", "epoch", "accuracy",
        {{"train", "steelblue", epochs, report.train_accuracy},
         {"validation", "darkorange", epochs, report.val_accuracy}});
    write_svg(svg, cfg.output_dir + "/accuracy.svg");

    std::printf("trained %zu epochs (best epoch %d), val accuracy %.4f, test accuracy %.4f\n",
                report.train_accuracy.size(), report.best_epoch,
                report.val_accuracy[static_cast<std::size_t>(report.best_epoch)], ev.accuracy);
    std::printf("model written to %s/model.json\n", cfg.output_dir.c_str());
    return kExitOk;
}

int cmd_eval(const CommonOpts& common, const std::string& model_path,
             const std::string& data_path) {
    const RunConfig cfg = resolve_config(common);
    ensure_out_dir(cfg);
    const MlpModel model = load_model(model_path);
    const Dataset d = load_csv(data_path);
    const DataSplit s = split(d, cfg.fractions, cfg.split_seed);
    const EvalResult ev = evaluate(model, s.test);

    std::ostringstream cm;
    cm << "true\\pred";
    for (int j = 0; j < kNumNoiseClasses; ++j)
        cm << ',' << noise_class_name(noise_class_from_label(j));
    cm << "\n";
    std::vector<std::string> names;
    std::vector<std::vector<double>> cells;
    for (int i = 0; i < kNumNoiseClasses; ++i) {
        names.push_back(noise_class_name(noise_class_from_label(i)));
        cm << names.back();
        std::vector<double> row;
        for (int j = 0; j < kNumNoiseClasses; ++j) {
            cm << ',' << ev.cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            row.push_back(static_cast<double>(
                ev.cm.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
        }
        cm << "\n";
        cells.push_back(std::move(row));
    }
    write_text(cm.str(), cfg.output_dir + "/confusion.csv");
    write_svg(render_heatmap("confusion matrix", names, names, cells),
              cfg.output_dir + "/confusion.svg");

    std::printf("five-class accuracy:      %.4f\n", ev.accuracy);
    std::printf("NM-vs-MK accuracy:        %.4f\n", ev.nm_vs_mk);
    std::printf("within-NM accuracy:       %.4f\n", ev.within_nm);
    std::printf("within-MK accuracy:       %.4f\n", ev.within_mk);
    return kExitOk;
}

int cmd_config(const CommonOpts& common) {
    const RunConfig cfg = resolve_config(common);
    std::fputs(dump_config(cfg).c_str(), stdout);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-qubit noise-class sensor: simulation, dataset, classifier"};
    app.require_subcommand(1);

    CommonOpts common;
    std::string cls_name = "none", cond_name = "i";
    double delta1 = 0.0, delta2 = 0.0, gamma = 0.0;
    int stride = 1;
    std::string data_path, model_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "config JSON path");
        sub->add_option("--seed", common.seed, "override the master seed");
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--backend", common.backend, "integration backend (rwa|lab)");
        sub->add_option("--per-class", common.per_class, "dataset points per class");
    };

    CLI::App* sim = app.add_subcommand("simulate", "single-shot simulation trace");
    add_common(sim);
    sim->add_option("--class", cls_name, "noise class (none|qs_*|mk_*)");
    sim->add_option("--condition", cond_name, "driving condition (i|ii|iii)");
    sim->add_option("--delta1", delta1, "quasistatic splitting shift of qubit 1");
    sim->add_option("--delta2", delta2, "quasistatic splitting shift of qubit 2");
    sim->add_option("--gamma", gamma, "Markovian dephasing rate");
    sim->add_option("--stride", stride, "trace sampling stride in steps")
        ->check(CLI::PositiveNumber);

    CLI::App* gen = app.add_subcommand("gen-data", "generate the labeled dataset");
    add_common(gen);

    CLI::App* tr = app.add_subcommand("train", "train the classifier on a dataset CSV");
    add_common(tr);
    tr->add_option("data", data_path, "dataset CSV path")->required();

    CLI::App* ev = app.add_subcommand("eval", "evaluate a model on a dataset's test split");
    add_common(ev);
    ev->add_option("model", model_path, "model JSON path")->required();
    ev->add_option("data", data_path, "dataset CSV path")->required();

    CLI::App* cf = app.add_subcommand("config", "print the effective config JSON");
    add_common(cf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (sim->parsed()) return cmd_simulate(common, cls_name, cond_name, delta1, delta2,
                                               gamma, stride);
        if (gen->parsed()) return cmd_gen_data(common);
        if (tr->parsed()) return cmd_train(common, data_path);
        if (ev->parsed()) return cmd_eval(common, model_path, data_path);
        if (cf->parsed()) return cmd_config(common);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const BadFractions& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const IoError& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const SchemaMismatch& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return kExitNumerical;
    }
    return kExitOk;
}
