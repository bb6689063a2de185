#include "smdg/cliapp.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "smdg/csvio.hpp"
#include "smdg/errors.hpp"
#include "smdg/version.hpp"

namespace smdg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json config_to_json(const ExperimentConfig& c) {
    json j;
    j["dimension"] = c.dimension;
    j["problem"] = c.problem;
    j["nx"] = c.nx;
    j["ny"] = c.ny;
    j["nt"] = c.nt;
    j["degree"] = c.degree;
    j["alpha"] = c.alpha;
    j["beta1"] = c.beta1;
    j["beta2"] = c.beta2;
    j["alpha1"] = c.alpha1;
    j["alpha2"] = c.alpha2;
    j["final_time"] = c.final_time;
    j["samples"] = c.samples;
    j["seed"] = c.seed;
    j["scheme"] = c.scheme;
    j["substeps"] = c.substeps;
    j["init"] = c.init;
    j["levels"] = c.levels;
    j["threads"] = c.threads;
    j["gbm_a"] = c.gbm_a;
    j["gbm_b"] = c.gbm_b;
    j["gbm_x0"] = c.gbm_x0;
    return j;
}

const std::set<std::string> kKnownKeys = {
    "dimension", "problem", "nx", "ny", "nt", "degree", "alpha", "beta1", "beta2",
    "alpha1", "alpha2", "final_time", "samples", "seed", "scheme", "substeps",
    "init", "levels", "threads", "gbm_a", "gbm_b", "gbm_x0"};

ExperimentConfig command_defaults(const std::string& command, int dimension_hint) {
    ExperimentConfig c;
    int dim = dimension_hint;
    if (command == "run1d") dim = 1;
    if (command == "run2d") dim = 2;
    if (dim == 2) {
        c.dimension = 2;
        c.problem = "maxwell2d_trig";
        c.nx = c.ny = 20;
        c.nt = 20;
        c.final_time = 0.1;
        c.samples = 100;
    }
    if (command == "order-check") c.final_time = 1.0;
    if (const char* env = std::getenv("SMDG_SEED"); env && *env)
        c.seed = std::strtoull(env, nullptr, 10);
    return c;
}

template <typename T>
void read_key(const json& j, const std::string& key, T& dst) {
    if (!j.contains(key)) return;
    try {
        dst = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw config_error("config key '" + key + "' has the wrong type");
    }
}

} // namespace

ExperimentConfig parse_config(const std::string& config_path, const std::string& command,
                              const Overrides& overrides) {
    json file = json::object();
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw config_error("config file '" + config_path + "' not found");
        try {
            in >> file;
        } catch (const json::exception& e) {
            throw config_error("config file is not valid JSON: " + std::string(e.what()));
        }
        if (!file.is_object()) throw config_error("config must be a flat JSON object");
        for (const auto& [key, value] : file.items()) {
            (void)value;
            if (!kKnownKeys.count(key)) throw config_error("unknown config key '" + key + "'");
        }
    }

    int dim_hint = 1;
    if (file.contains("dimension")) dim_hint = file["dimension"].get<int>();
    ExperimentConfig c = command_defaults(command, dim_hint);

    read_key(file, "dimension", c.dimension);
    read_key(file, "problem", c.problem);
    read_key(file, "nx", c.nx);
    read_key(file, "ny", c.ny);
    read_key(file, "nt", c.nt);
    read_key(file, "degree", c.degree);
    read_key(file, "alpha", c.alpha);
    read_key(file, "beta1", c.beta1);
    read_key(file, "beta2", c.beta2);
    read_key(file, "alpha1", c.alpha1);
    read_key(file, "alpha2", c.alpha2);
    read_key(file, "final_time", c.final_time);
    read_key(file, "samples", c.samples);
    read_key(file, "seed", c.seed);
    read_key(file, "scheme", c.scheme);
    read_key(file, "substeps", c.substeps);
    read_key(file, "init", c.init);
    read_key(file, "levels", c.levels);
    read_key(file, "threads", c.threads);
    read_key(file, "gbm_a", c.gbm_a);
    read_key(file, "gbm_b", c.gbm_b);
    read_key(file, "gbm_x0", c.gbm_x0);

    if (overrides.seed) c.seed = *overrides.seed;
    if (overrides.samples) c.samples = *overrides.samples;
    if (overrides.threads) c.threads = *overrides.threads;

    if (command == "run1d" && c.dimension != 1)
        throw config_error("run1d requires dimension = 1");
    if (command == "run2d" && c.dimension != 2)
        throw config_error("run2d requires dimension = 2");
    if (command != "order-check") c.validate();
    return c;
}

std::string canonical_config(const ExperimentConfig& config) {
    // thread count is an execution detail: parallel and serial runs of the
    // same experiment must stamp identical hashes
    json j = config_to_json(config);
    j.erase("threads");
    return j.dump();
}

namespace {

struct OutputSet {
    fs::path dir;
    std::vector<std::string> written;

    std::ofstream open(const std::string& name, const ExperimentConfig& cfg) {
        const fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw error("cannot open output file " + p.string());
        out << "# config=" << fnv1a_hex(canonical_config(cfg)) << " seed=" << cfg.seed << "\n";
        written.push_back(p.string());
        return out;
    }
    void discard_all() {
        for (const auto& p : written) {
            std::error_code ec;
            fs::remove(p, ec);
        }
    }
};

void write_convergence_table(std::ofstream& out, const ConvergenceReport& rep, int dimension) {
    if (dimension == 1) {
        out << "Nx,Nt,rms_e_u,rate_u,rms_e_v,rate_v,se_e_u,se_e_v\n";
        for (const auto& lv : rep.levels)
            out << lv.nx << ',' << lv.nt << ',' << fmt_sci(lv.rms[0]) << ','
                << fmt_sci(lv.rate[0]) << ',' << fmt_sci(lv.rms[1]) << ','
                << fmt_sci(lv.rate[1]) << ',' << fmt_sci(lv.se[0]) << ','
                << fmt_sci(lv.se[1]) << "\n";
    } else {
        out << "Nx,Ny,Nt,rms_e_E,rate_E,rms_e_S,rate_S,rms_e_T,rate_T,"
               "se_e_E,se_e_S,se_e_T\n";
        for (const auto& lv : rep.levels)
            out << lv.nx << ',' << lv.ny << ',' << lv.nt << ',' << fmt_sci(lv.rms[0]) << ','
                << fmt_sci(lv.rate[0]) << ',' << fmt_sci(lv.rms[1]) << ','
                << fmt_sci(lv.rate[1]) << ',' << fmt_sci(lv.rms[2]) << ','
                << fmt_sci(lv.rate[2]) << ',' << fmt_sci(lv.se[0]) << ','
                << fmt_sci(lv.se[1]) << ',' << fmt_sci(lv.se[2]) << "\n";
    }
}

void write_energy(std::ofstream& out, const MCResult& mc) {
    const bool with_ref = mc.energy_growth_rate.has_value();
    out << (with_ref ? "t,mean_energy,reference\n" : "t,mean_energy\n");
    for (size_t n = 0; n < mc.times.size(); ++n) {
        out << fmt_sci(mc.times[n]) << ',' << fmt_sci(mc.mean_energy[n]);
        if (with_ref)
            out << ','
                << fmt_sci(mc.initial_energy *
                           std::exp(*mc.energy_growth_rate * mc.times[n]));
        out << "\n";
    }
}

void write_fields(std::ofstream& out, const ExperimentConfig& cfg, const StateDump& dump) {
    if (cfg.dimension == 1) {
        out << "when,field,cell,mode,coef\n";
        const int n = cfg.nx, kp = cfg.degree + 1;
        const char* names[2] = {"u", "v"};
        const std::vector<double>* states[2] = {&dump.initial, &dump.final_sample0};
        const char* when[2] = {"initial", "final"};
        for (int w = 0; w < 2; ++w)
            for (int f = 0; f < 2; ++f)
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < kp; ++l)
                        out << when[w] << ',' << names[f] << ',' << j << ',' << l << ','
                            << fmt_sci((*states[w])[f * kp * n + l * n + j]) << "\n";
    } else {
        out << "when,field,cell_y,cell_x,mode,coef\n";
        const int nx = cfg.nx, ny = cfg.ny, kp = cfg.degree + 1;
        const int block = kp * kp * nx * ny;
        const char* names[3] = {"E", "S", "T"};
        const std::vector<double>* states[2] = {&dump.initial, &dump.final_sample0};
        const char* when[2] = {"initial", "final"};
        for (int w = 0; w < 2; ++w)
            for (int f = 0; f < 3; ++f)
                for (int cy = 0; cy < ny; ++cy)
                    for (int cx = 0; cx < nx; ++cx)
                        for (int lx = 0; lx < kp; ++lx)
                            for (int ly = 0; ly < kp; ++ly) {
                                // documented dump order: mode = lx*(k+1) + ly
                                const int mode = lx * kp + ly;
                                const size_t idx = static_cast<size_t>(f) * block +
                                                   ((static_cast<size_t>(ly) * kp + lx) * ny + cy) * nx + cx;
                                out << when[w] << ',' << names[f] << ',' << cy << ',' << cx
                                    << ',' << mode << ',' << fmt_sci((*states[w])[idx]) << "\n";
                            }
    }
}

void write_order_table(std::ofstream& out, const OrderCheckResult& oc) {
    out << "tau,rms_err_taylor20,rate_taylor20,rms_err_em,rate_em\n";
    for (size_t i = 0; i < oc.taus.size(); ++i) {
        const double rt =
            i == 0 ? 0.0 : std::log2(oc.err_taylor[i - 1] / oc.err_taylor[i]);
        const double re = i == 0 ? 0.0 : std::log2(oc.err_em[i - 1] / oc.err_em[i]);
        out << fmt_sci(oc.taus[i]) << ',' << fmt_sci(oc.err_taylor[i]) << ',' << fmt_sci(rt)
            << ',' << fmt_sci(oc.err_em[i]) << ',' << fmt_sci(re) << "\n";
    }
}

ConvergenceReport single_level_report(const ExperimentConfig& cfg, const MCResult& mc) {
    ConvergenceReport rep;
    rep.fields = mc.fields;
    rep.samples = mc.samples;
    rep.seed = cfg.seed;
    ConvergenceLevel lv;
    lv.nx = cfg.nx;
    lv.ny = cfg.dimension == 2 ? cfg.ny : 0;
    lv.nt = cfg.nt;
    lv.rms = mc.rms;
    lv.se = mc.se;
    lv.rate.assign(mc.rms.size(), 0.0);
    rep.levels.push_back(std::move(lv));
    return rep;
}

} // namespace

RunManifest dispatch(const std::string& command, const ExperimentConfig& config,
                     const std::string& out_dir, bool dump_fields) {
    const auto t_start = std::chrono::steady_clock::now();
    fs::create_directories(out_dir);
    OutputSet outs{out_dir, {}};
    RunManifest man;
    man.command = command;
    man.root_seed = config.seed;
    man.config_hash = fnv1a_hex(canonical_config(config));

    json extra = json::object();
    try {
        if (command == "run1d" || command == "run2d") {
            const MCResult mc = monte_carlo(config);
            auto table = outs.open("table.csv", config);
            write_convergence_table(table, single_level_report(config, mc), config.dimension);
            auto energy = outs.open("energy.csv", config);
            write_energy(energy, mc);
            if (dump_fields) {
                const StateDump dump = sample0_states(config);
                auto fieldsf = outs.open("fields.csv", config);
                write_fields(fieldsf, config, dump);
            }
        } else if (command == "convergence") {
            const ConvergenceReport rep = convergence_study(config);
            auto table = outs.open("table.csv", config);
            write_convergence_table(table, rep, config.dimension);
        } else if (command == "energy") {
            const MCResult mc = monte_carlo(config);
            auto energy = outs.open("energy.csv", config);
            write_energy(energy, mc);
        } else if (command == "order-check") {
            const OrderCheckResult oc = order_check(config);
            auto table = outs.open("table.csv", config);
            write_order_table(table, oc);
            extra["slope_taylor20"] = oc.slope_taylor;
            extra["slope_em"] = oc.slope_em;
        } else {
            throw config_error("unknown command '" + command + "'");
        }
    } catch (...) {
        outs.discard_all();
        throw;
    }

    man.outputs = outs.written;
    const auto t_end = std::chrono::steady_clock::now();
    man.runtime_seconds = std::chrono::duration<double>(t_end - t_start).count();

    json j;
    j["artifact_version"] = SMDG_VERSION;
    j["command"] = man.command;
    j["config"] = config_to_json(config);
    j["config_hash"] = man.config_hash;
    j["root_seed"] = man.root_seed;
    j["runtime_seconds"] = man.runtime_seconds;
    j["outputs"] = man.outputs;
    for (const auto& [k, v] : extra.items()) j[k] = v;
    const fs::path mp = fs::path(out_dir) / "manifest.json";
    std::ofstream mf(mp, std::ios::binary);
    if (!mf) throw error("cannot open output file " + mp.string());
    mf << j.dump(2) << "\n";
    man.outputs.push_back(mp.string());
    return man;
}

} // namespace smdg::cli
