#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smdg/problems.hpp"
#include "smdg/sde.hpp"

namespace smdg {

struct ExperimentConfig {
    int dimension = 1;
    std::string problem = "maxwell1d_trig";
    int nx = 20;
    int ny = 20; // 2D only
    int nt = 200;
    int degree = 1;
    double alpha = 0.5, beta1 = 0.0, beta2 = 0.0; // 1D fluxes
    double alpha1 = 0.5, alpha2 = 0.5;            // 2D fluxes
    double final_time = 0.5;
    int samples = 200;
    std::uint64_t seed = 12345;
    std::string scheme = "taylor2"; // or "euler_maruyama"
    int substeps = 100;             // M sub-increments per time step
    std::string init = "projection"; // or "l2"
    int levels = 3;                 // convergence ladder depth
    int threads = 0;                // 0 = hardware concurrency
    // order-check (GBM oracle) knobs
    double gbm_a = 1.0, gbm_b = 0.5, gbm_x0 = 1.0;

    void validate() const; // ranges and well-posedness; throws config_error
    SchemeChoice scheme_choice() const;
};

struct SampleResult {
    std::vector<double> errors;   // per field, L2 at final time
    std::vector<double> energy;   // nt+1 entries, every step
    double w_final = 0.0;
    std::uint64_t stream_key = 0;
};

struct MCResult {
    std::vector<std::string> fields;
    std::vector<double> rms;      // sqrt(mean of squared per-sample errors)
    std::vector<double> se;       // bootstrap standard error of each rms
    std::vector<double> times;    // nt+1 entries
    std::vector<double> mean_energy;
    double initial_energy = 0.0;
    // lambda^2 when the mean-energy ODE closes (linear isometric noise,
    // beta = 0): reference curve M(0) exp(lambda^2 t).
    std::optional<double> energy_growth_rate;
    std::vector<std::uint64_t> sample_keys;
    int samples = 0;
};

struct ConvergenceLevel {
    int nx = 0, ny = 0, nt = 0;
    std::vector<double> rms;
    std::vector<double> rate; // 0 on the first level
    std::vector<double> se;
};

struct ConvergenceReport {
    std::vector<std::string> fields;
    std::vector<ConvergenceLevel> levels;
    int samples = 0;
    std::uint64_t seed = 0;
};

struct OrderCheckResult {
    std::vector<double> taus;
    std::vector<double> err_taylor;
    std::vector<double> err_em;
    double slope_taylor = 0.0; // least-squares log2 slope
    double slope_em = 0.0;
};

// One path: initialize by the configured projection of the exact data,
// integrate to T, measure errors along the realized Brownian path.
SampleResult run_sample(const ExperimentConfig& config, int sample_index);

// Full Monte Carlo run. Samples execute in parallel (config.threads) and the
// aggregation is ordered by sample index, so thread count never changes the
// result. Any sample failure aborts with its stream key in the message.
MCResult monte_carlo(const ExperimentConfig& config);

// Refinement ladder (nx, nt doubled per level, ny too in 2D) with the
// Brownian path shared across levels per sample (counter-based substep grid
// at the finest level, aggregated on coarser ones).
ConvergenceReport convergence_study(const ExperimentConfig& config);

// Strong-order measurement on geometric Brownian motion with coupled paths.
OrderCheckResult order_check(const ExperimentConfig& config);

// Stacked coefficient vectors for field dumps: the deterministic initial
// data and the final state of sample 0.
struct StateDump {
    std::vector<double> initial;
    std::vector<double> final_sample0;
};
StateDump sample0_states(const ExperimentConfig& config);

} // namespace smdg
