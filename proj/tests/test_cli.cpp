#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "smdg/cliapp.hpp"
#include "smdg/errors.hpp"

using namespace smdg;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
    const fs::path p = fs::temp_directory_path() / ("smdg_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.json";
    std::ofstream out(p);
    out << body;
    return p.string();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("parse_config: defaults, file values, overrides, env") {
    const auto dir = temp_dir("parse");
    const auto path = write_config(
        dir, R"({"nx": 20, "nt": 200, "degree": 1, "alpha": 0.5, "seed": 1})");
    const auto c = cli::parse_config(path, "run1d", {});
    CHECK(c.nx == 20);
    CHECK(c.nt == 200);
    CHECK(c.degree == 1);
    CHECK(c.alpha == 0.5);
    CHECK(c.seed == 1);
    CHECK(c.dimension == 1);
    CHECK(c.samples == 200); // 1d desk-scale default

    cli::Overrides ov;
    ov.seed = 77;
    ov.samples = 3;
    const auto c2 = cli::parse_config(path, "run1d", ov);
    CHECK(c2.seed == 77);
    CHECK(c2.samples == 3);

    // SMDG_SEED is the lowest-priority source
    setenv("SMDG_SEED", "555", 1);
    const auto no_file = cli::parse_config("", "run1d", {});
    CHECK(no_file.seed == 555);
    const auto file_wins = cli::parse_config(path, "run1d", {});
    CHECK(file_wins.seed == 1);
    unsetenv("SMDG_SEED");

    // 2d defaults follow the command
    const auto c3 = cli::parse_config("", "run2d", {});
    CHECK(c3.dimension == 2);
    CHECK(c3.samples == 100);
    CHECK(c3.final_time == 0.1);
}

TEST_CASE("parse_config diagnostics") {
    const auto dir = temp_dir("diag");

    CHECK_THROWS_WITH_AS(
        cli::parse_config(write_config(dir, R"({"frobnicate": 1})"), "run1d", {}),
        doctest::Contains("unknown config key 'frobnicate'"), config_error);

    CHECK_THROWS_WITH_AS(
        cli::parse_config(write_config(dir, R"({"beta1": -1.0})"), "run1d", {}),
        doctest::Contains("energy law"), config_error);

    CHECK_THROWS_WITH_AS(
        cli::parse_config(
            write_config(dir, R"({"alpha": 0.0, "beta1": 0.0, "beta2": 0.0})"), "run1d", {}),
        doctest::Contains("well-posedness"), config_error);

    CHECK_THROWS_AS(cli::parse_config(dir.string() + "/missing.json", "run1d", {}),
                    config_error);
    CHECK_THROWS_AS(cli::parse_config(write_config(dir, "not json"), "run1d", {}),
                    config_error);
}

TEST_CASE("dispatch run1d writes the contracted files") {
    const auto dir = temp_dir("run1d");
    ExperimentConfig c;
    c.nx = 8;
    c.nt = 12;
    c.degree = 1;
    c.final_time = 0.1;
    c.samples = 3;
    c.seed = 9;
    c.substeps = 10;
    const auto man = cli::dispatch("run1d", c, (dir / "out").string(), true);

    for (const auto& f : man.outputs) CHECK(fs::exists(f));
    const std::string table = slurp(dir / "out" / "table.csv");
    CHECK(table.rfind("# config=", 0) == 0);
    CHECK(table.find("Nx,Nt,rms_e_u,rate_u,rms_e_v,rate_v") != std::string::npos);
    const std::string energy = slurp(dir / "out" / "energy.csv");
    CHECK(energy.find("t,mean_energy,reference") != std::string::npos);
    const std::string fields = slurp(dir / "out" / "fields.csv");
    CHECK(fields.find("when,field,cell,mode,coef") != std::string::npos);
    const std::string manifest = slurp(dir / "out" / "manifest.json");
    CHECK(manifest.find("\"config_hash\"") != std::string::npos);
    CHECK(manifest.find("\"artifact_version\"") != std::string::npos);
}

TEST_CASE("byte-identical reruns, serial == parallel") {
    ExperimentConfig c;
    c.nx = 8;
    c.nt = 10;
    c.degree = 1;
    c.final_time = 0.1;
    c.samples = 4;
    c.seed = 31;
    c.substeps = 8;

    const auto d1 = temp_dir("repr1"), d2 = temp_dir("repr2"), d3 = temp_dir("repr3");
    c.threads = 1;
    cli::dispatch("run1d", c, d1.string());
    cli::dispatch("run1d", c, d2.string());
    c.threads = 2;
    cli::dispatch("run1d", c, d3.string());

    CHECK(slurp(d1 / "table.csv") == slurp(d2 / "table.csv"));
    CHECK(slurp(d1 / "energy.csv") == slurp(d2 / "energy.csv"));
    CHECK(slurp(d1 / "table.csv") == slurp(d3 / "table.csv"));
    CHECK(slurp(d1 / "energy.csv") == slurp(d3 / "energy.csv"));
}

TEST_CASE("energy command emits the reference column for the paper case") {
    const auto dir = temp_dir("energy");
    ExperimentConfig c;
    c.nx = 8;
    c.nt = 10;
    c.degree = 1;
    c.final_time = 0.1;
    c.samples = 3;
    c.seed = 2;
    c.substeps = 8;
    cli::dispatch("energy", c, dir.string());
    const std::string energy = slurp(dir / "energy.csv");
    CHECK(energy.find("t,mean_energy,reference") != std::string::npos);
    // 11 data rows: t = 0 .. T in nt steps
    int rows = 0;
    for (char ch : energy)
        if (ch == '\n') ++rows;
    CHECK(rows == 2 + c.nt + 1); // comment + header + nt+1 samples
}

TEST_CASE("order-check command writes slope columns and manifest slopes") {
    const auto dir = temp_dir("order");
    ExperimentConfig c;
    c.samples = 60;
    c.seed = 3;
    c.substeps = 20;
    c.levels = 3;
    c.final_time = 1.0;
    cli::dispatch("order-check", c, dir.string());
    const std::string table = slurp(dir / "table.csv");
    CHECK(table.find("tau,rms_err_taylor20,rate_taylor20,rms_err_em,rate_em") !=
          std::string::npos);
    const std::string manifest = slurp(dir / "manifest.json");
    CHECK(manifest.find("slope_taylor20") != std::string::npos);
    CHECK(manifest.find("slope_em") != std::string::npos);
}

TEST_CASE("convergence command on 2d writes the 2d header") {
    const auto dir = temp_dir("conv2d");
    ExperimentConfig c;
    c.dimension = 2;
    c.problem = "maxwell2d_trig";
    c.nx = c.ny = 4;
    c.nt = 4;
    c.degree = 1;
    c.final_time = 0.05;
    c.samples = 2;
    c.levels = 2;
    c.seed = 8;
    c.substeps = 6;
    cli::dispatch("convergence", c, dir.string());
    const std::string table = slurp(dir / "table.csv");
    CHECK(table.find("Nx,Ny,Nt,rms_e_E,rate_E,rms_e_S,rate_S,rms_e_T,rate_T") !=
          std::string::npos);
}
