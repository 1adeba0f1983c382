#include "qsense/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qsense/errors.hpp"

namespace qsense {

namespace {

using nlohmann::json;

/// Fails when `obj` holds a key outside `allowed`.
void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok)
            throw ConfigError(std::string("config: unknown key \"") + key + "\" in " + where);
    }
}

template <typename T>
void get_if_present(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: bad value for \"") + key + "\": " + e.what());
    }
}

Backend backend_from_string(const std::string& s) {
    if (s == "rwa") return Backend::RotatingFrame;
    if (s == "lab") return Backend::LabFrame;
    throw ConfigError("config: backend must be \"rwa\" or \"lab\", got \"" + s + "\"");
}

MkSampling mk_sampling_from_string(const std::string& s) {
    if (s == "lindblad") return MkSampling::Lindblad;
    if (s == "trajectories") return MkSampling::Trajectories;
    throw ConfigError("config: mk_sampling must be \"lindblad\" or \"trajectories\", got \"" +
                      s + "\"");
}

}  // namespace

void RunConfig::validate() const {
    try {
        physical.validate();
        pulses.validate();
        noise.validate();
        classifier.validate();
        fractions.validate();
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!(integrator.dt > 0.0) || !(dataset_dt > 0.0))
        throw ConfigError("config: time steps must be > 0");
    if (per_class < 1) throw ConfigError("config: per_class must be >= 1");
    if (n_realizations < 1) throw ConfigError("config: n_realizations must be >= 1");
    if (output_dir.empty()) throw ConfigError("config: output_dir must not be empty");
}

GenerationConfig RunConfig::generation() const {
    GenerationConfig g;
    g.system = physical;
    g.timing = pulses;
    g.integrator = integrator;
    g.integrator.dt = dataset_dt;
    g.ranges = noise;
    g.per_class = per_class;
    g.n_realizations = n_realizations;
    g.master_seed = master_seed;
    g.mk_sampling = mk_sampling;
    g.parallel = parallel;
    return g;
}

RunConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");

    RunConfig c;
    reject_unknown(doc, "top level",
                   {"physical", "pulses", "integrator", "noise", "dataset", "classifier",
                    "output_dir"});

    if (doc.contains("physical")) {
        const json& p = doc["physical"];
        reject_unknown(p, "physical", {"epsilon", "g"});
        get_if_present(p, "epsilon", c.physical.epsilon);
        get_if_present(p, "g", c.physical.g);
    }
    if (doc.contains("pulses")) {
        const json& p = doc["pulses"];
        reject_unknown(p, "pulses", {"shape", "omega0", "width", "delay", "edge"});
        std::string shape = "gaussian";
        get_if_present(p, "shape", shape);
        if (shape != "gaussian")
            throw ConfigError("config: only \"gaussian\" pulse shape is supported");
        get_if_present(p, "omega0", c.pulses.omega0);
        get_if_present(p, "width", c.pulses.pulse_width);
        get_if_present(p, "delay", c.pulses.delay);
        get_if_present(p, "edge", c.pulses.edge);
    }
    if (doc.contains("integrator")) {
        const json& p = doc["integrator"];
        reject_unknown(p, "integrator", {"backend", "dt"});
        std::string backend = "rwa";
        get_if_present(p, "backend", backend);
        c.integrator.backend = backend_from_string(backend);
        get_if_present(p, "dt", c.integrator.dt);
    }
    if (doc.contains("noise")) {
        const json& p = doc["noise"];
        reject_unknown(p, "noise",
                       {"corr_min", "sigma0", "sigma_lo", "sigma_hi", "gamma_lo", "gamma_hi",
                        "fixed_corr"});
        get_if_present(p, "corr_min", c.noise.corr_min);
        get_if_present(p, "sigma0", c.noise.sigma0);
        get_if_present(p, "sigma_lo", c.noise.sigma_lo);
        get_if_present(p, "sigma_hi", c.noise.sigma_hi);
        get_if_present(p, "gamma_lo", c.noise.gamma_lo);
        get_if_present(p, "gamma_hi", c.noise.gamma_hi);
        get_if_present(p, "fixed_corr", c.noise.fixed_corr);
    }
    if (doc.contains("dataset")) {
        const json& p = doc["dataset"];
        reject_unknown(p, "dataset",
                       {"per_class", "n_realizations", "master_seed", "mk_sampling", "dt",
                        "parallel"});
        get_if_present(p, "per_class", c.per_class);
        get_if_present(p, "n_realizations", c.n_realizations);
        get_if_present(p, "master_seed", c.master_seed);
        std::string mk = c.mk_sampling == MkSampling::Lindblad ? "lindblad" : "trajectories";
        get_if_present(p, "mk_sampling", mk);
        c.mk_sampling = mk_sampling_from_string(mk);
        get_if_present(p, "dt", c.dataset_dt);
        get_if_present(p, "parallel", c.parallel);
    }
    if (doc.contains("classifier")) {
        const json& p = doc["classifier"];
        reject_unknown(p, "classifier",
                       {"hidden", "learning_rate", "batch_size", "epochs", "patience",
                        "fractions", "init_seed", "split_seed"});
        get_if_present(p, "hidden", c.classifier.hidden);
        get_if_present(p, "learning_rate", c.classifier.learning_rate);
        get_if_present(p, "batch_size", c.classifier.batch_size);
        get_if_present(p, "epochs", c.classifier.epochs);
        get_if_present(p, "patience", c.classifier.patience);
        if (p.contains("fractions")) {
            std::vector<double> fr;
            get_if_present(p, "fractions", fr);
            if (fr.size() != 3)
                throw ConfigError("config: classifier.fractions must have 3 entries");
            c.fractions = {fr[0], fr[1], fr[2]};
        }
        get_if_present(p, "init_seed", c.init_seed);
        get_if_present(p, "split_seed", c.split_seed);
    }
    get_if_present(doc, "output_dir", c.output_dir);

    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("config: cannot open " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string dump_config(const RunConfig& c) {
    json doc{
        {"physical", {{"epsilon", c.physical.epsilon}, {"g", c.physical.g}}},
        {"pulses",
         {{"shape", "gaussian"},
          {"omega0", c.pulses.omega0},
          {"width", c.pulses.pulse_width},
          {"delay", c.pulses.delay},
          {"edge", c.pulses.edge}}},
        {"integrator",
         {{"backend", c.integrator.backend == Backend::RotatingFrame ? "rwa" : "lab"},
          {"dt", c.integrator.dt}}},
        {"noise",
         {{"corr_min", c.noise.corr_min},
          {"sigma0", c.noise.sigma0},
          {"sigma_lo", c.noise.sigma_lo},
          {"sigma_hi", c.noise.sigma_hi},
          {"gamma_lo", c.noise.gamma_lo},
          {"gamma_hi", c.noise.gamma_hi},
          {"fixed_corr", c.noise.fixed_corr}}},
        {"dataset",
         {{"per_class", c.per_class},
          {"n_realizations", c.n_realizations},
          {"master_seed", c.master_seed},
          {"mk_sampling",
           c.mk_sampling == MkSampling::Lindblad ? "lindblad" : "trajectories"},
          {"dt", c.dataset_dt},
          {"parallel", c.parallel}}},
        {"classifier",
         {{"hidden", c.classifier.hidden},
          {"learning_rate", c.classifier.learning_rate},
          {"batch_size", c.classifier.batch_size},
          {"epochs", c.classifier.epochs},
          {"patience", c.classifier.patience},
          {"fractions",
           std::vector<double>{c.fractions.train, c.fractions.validation, c.fractions.test}},
          {"init_seed", c.init_seed},
          {"split_seed", c.split_seed}}},
        {"output_dir", c.output_dir},
    };
    return doc.dump(2) + "\n";
}

}  // namespace qsense
