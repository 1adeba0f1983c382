#include "qsense/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qsense/errors.hpp"

namespace qsense {

namespace {

using nlohmann::json;

const char* kCsvHeader =
    "label,class,param_name,param_value,sigma,xi_i,xi_ii,xi_iii,"
    "stderr_i,stderr_ii,stderr_iii,point_seed";

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json config_snapshot(const GenerationConfig& cfg) {
    return json{
        {"schema", "qsense-dataset-v1"},
        {"system", {{"epsilon", cfg.system.epsilon}, {"g", cfg.system.g}}},
        {"timing",
         {{"omega0", cfg.timing.omega0},
          {"pulse_width", cfg.timing.pulse_width},
          {"delay", cfg.timing.delay},
          {"edge", cfg.timing.edge}}},
        {"integrator",
         {{"backend", cfg.integrator.backend == Backend::RotatingFrame ? "rwa" : "lab"},
          {"dt", cfg.integrator.dt}}},
        {"ranges",
         {{"corr_min", cfg.ranges.corr_min},
          {"sigma0", cfg.ranges.sigma0},
          {"sigma_lo", cfg.ranges.sigma_lo},
          {"sigma_hi", cfg.ranges.sigma_hi},
          {"gamma_lo", cfg.ranges.gamma_lo},
          {"gamma_hi", cfg.ranges.gamma_hi},
          {"fixed_corr", cfg.ranges.fixed_corr}}},
        {"per_class", cfg.per_class},
        {"n_realizations", cfg.n_realizations},
        {"master_seed", cfg.master_seed},
        {"mk_sampling",
         cfg.mk_sampling == MkSampling::Lindblad ? "lindblad" : "trajectories"},
    };
}

}  // namespace

void FeatureVector::validate() const {
    for (double v : xi)
        if (!(v >= 0.0 && v <= 1.0)) throw BadRange("FeatureVector: xi outside [0, 1]");
    if (label < 0 || label >= kNumNoiseClasses)
        throw BadRange("FeatureVector: label outside 0..4");
}

void GenerationConfig::validate() const {
    system.validate();
    timing.validate();
    ranges.validate();
    if (per_class < 1) throw BadRange("GenerationConfig: per_class must be >= 1");
    if (n_realizations < 1) throw BadRange("GenerationConfig: n_realizations must be >= 1");
}

EngineSet::EngineSet(const SystemParams& p, const ProtocolTiming& timing,
                     const IntegratorConfig& cfg) {
    const EigenFrame frame = build_eigenframe(p);
    engines_.reserve(kNumConditions);
    for (int c = 0; c < kNumConditions; ++c)
        engines_.emplace_back(
            p, make_protocol(static_cast<DrivingCondition>(c), timing, frame), cfg);
}

const TransferEngine& EngineSet::engine(DrivingCondition c) const {
    return engines_[static_cast<std::size_t>(c)];
}

std::uint64_t point_seed_of(std::uint64_t master_seed, NoiseClass c, int point_index) {
    return derive_seed(master_seed, static_cast<std::uint64_t>(c),
                       static_cast<std::uint64_t>(point_index));
}

FeatureVector generate_point(NoiseClass c, std::uint64_t point_seed,
                             const GenerationConfig& cfg, const EngineSet& engines) {
    RngStream draw(derive_seed(point_seed, 0));
    const ClassParams params = draw_class_params(c, draw, cfg.ranges);

    FeatureVector out;
    out.label = static_cast<int>(c);
    out.point_seed = point_seed;
    if (const auto* qs = std::get_if<QuasistaticSpec>(&params)) {
        out.sigma = qs->sigma;
        if (c == NoiseClass::QsUncorrelated) {
            out.param_name = "sigma";
            out.param_value = qs->sigma;
        } else {
            out.param_name = "corr";
            out.param_value = qs->corr;
        }
    } else {
        const auto& mk = std::get<MarkovSpec>(params);
        out.param_name = "gamma";
        out.param_value = mk.gamma;
        out.sigma = 0.0;
    }

    for (int cond = 0; cond < kNumConditions; ++cond) {
        MonteCarloConfig mc;
        mc.n_realizations = cfg.n_realizations;
        mc.master_seed = derive_seed(point_seed, static_cast<std::uint64_t>(1 + cond));
        mc.parallel = cfg.parallel;
        const auto& eng = engines.engine(static_cast<DrivingCondition>(cond));
        XiEstimate est;
        if (is_markovian(c) && cfg.mk_sampling == MkSampling::Trajectories)
            est = eng.xi_trajectories(std::get<MarkovSpec>(params), mc);
        else
            est = eng.xi_estimate(params, mc);
        out.xi[static_cast<std::size_t>(cond)] = est.mean;
        out.stderr_[static_cast<std::size_t>(cond)] = est.stderr;
    }
    out.validate();
    return out;
}

Dataset generate_dataset(const GenerationConfig& cfg) {
    cfg.validate();
    const EngineSet engines(cfg.system, cfg.timing, cfg.integrator);
    Dataset d;
    d.rows.reserve(static_cast<std::size_t>(cfg.per_class) * kNumNoiseClasses);
    for (int c = 0; c < kNumNoiseClasses; ++c) {
        const NoiseClass cls = static_cast<NoiseClass>(c);
        for (int p = 0; p < cfg.per_class; ++p)
            d.rows.push_back(
                generate_point(cls, point_seed_of(cfg.master_seed, cls, p), cfg, engines));
    }
    d.meta_json = config_snapshot(cfg).dump(2) + "\n";
    return d;
}

void save_csv(const Dataset& d, const std::string& path) {
    std::ostringstream body;
    body << kCsvHeader << "\n";
    for (const FeatureVector& r : d.rows) {
        body << r.label << ',' << noise_class_name(noise_class_from_label(r.label)) << ','
             << r.param_name << ',' << fmt_double(r.param_value) << ','
             << fmt_double(r.sigma) << ',' << fmt_double(r.xi[0]) << ','
             << fmt_double(r.xi[1]) << ',' << fmt_double(r.xi[2]) << ','
             << fmt_double(r.stderr_[0]) << ',' << fmt_double(r.stderr_[1]) << ','
             << fmt_double(r.stderr_[2]) << ',' << r.point_seed << "\n";
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw IoError("save_csv: cannot open " + tmp);
        f << body.str();
        if (!f) throw IoError("save_csv: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw IoError("save_csv: rename to " + path + " failed");

    if (!d.meta_json.empty()) {
        const std::string meta_path = path + ".meta.json";
        const std::string meta_tmp = meta_path + ".tmp";
        {
            std::ofstream f(meta_tmp, std::ios::binary);
            if (!f) throw IoError("save_csv: cannot open " + meta_tmp);
            f << d.meta_json;
            if (!f) throw IoError("save_csv: write failed for " + meta_tmp);
        }
        if (std::rename(meta_tmp.c_str(), meta_path.c_str()) != 0)
            throw IoError("save_csv: rename to " + meta_path + " failed");
    }
}

Dataset load_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("load_csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw SchemaMismatch("load_csv: empty file " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw SchemaMismatch("load_csv: unexpected header in " + path);

    Dataset d;
    std::size_t lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream row(line);
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() != 12)
            throw SchemaMismatch("load_csv: line " + std::to_string(lineno) +
                                 " has " + std::to_string(cells.size()) + " columns");
        try {
            FeatureVector r;
            r.label = std::stoi(cells[0]);
            if (cells[1] != noise_class_name(noise_class_from_label(r.label)))
                throw SchemaMismatch("load_csv: class name does not match label on line " +
                                     std::to_string(lineno));
            r.param_name = cells[2];
            r.param_value = std::stod(cells[3]);
            r.sigma = std::stod(cells[4]);
            for (int k = 0; k < 3; ++k) {
                r.xi[static_cast<std::size_t>(k)] = std::stod(cells[5 + k]);
                r.stderr_[static_cast<std::size_t>(k)] = std::stod(cells[8 + k]);
            }
            r.point_seed = std::stoull(cells[11]);
            r.validate();
            d.rows.push_back(std::move(r));
        } catch (const SchemaMismatch&) {
            throw;
        } catch (const std::exception& e) {
            throw SchemaMismatch("load_csv: bad value on line " + std::to_string(lineno) +
                                 ": " + e.what());
        }
    }

    std::ifstream meta(path + ".meta.json", std::ios::binary);
    if (meta) {
        std::ostringstream ss;
        ss << meta.rdbuf();
        d.meta_json = ss.str();
    }
    return d;
}

}  // namespace qsense
