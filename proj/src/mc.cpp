#include "smdg/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <thread>

#include "smdg/errors.hpp"
#include "smdg/kernels.hpp"

namespace smdg {

namespace {

void run_parallel(int n_tasks, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, n_tasks));
    if (threads == 1) {
        for (int i = 0; i < n_tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= n_tasks || failed.load()) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
                failed.store(true);
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// Everything shared by all samples of one run: mesh, operators, initial data.
struct Context {
    int dimension = 1;
    int k = 1;
    int fields = 2;
    int block = 0;

    Mesh1D mesh1;
    std::unique_ptr<DriftOp1D> drift1;
    Problem1D prob1;

    TensorMesh2D mesh2;
    std::unique_ptr<DriftOp2D> drift2;
    Problem2D prob2;

    std::unique_ptr<BlockCouplingOp> coupling;
    std::function<void(const double*, double, double*)> general_noise;
    std::vector<double> x0;
    std::vector<std::string> field_names;
    SDESystem sys;
};

State1D state_from_stacked_1d(const Context& ctx, const double* x, double t) {
    State1D st;
    st.mesh = &ctx.mesh1;
    st.t = t;
    st.u = FieldCoeffs1D(ctx.mesh1.n_cells, ctx.k);
    st.v = FieldCoeffs1D(ctx.mesh1.n_cells, ctx.k);
    std::copy(x, x + ctx.block, st.u.data.data());
    std::copy(x + ctx.block, x + 2 * ctx.block, st.v.data.data());
    return st;
}

State2D state_from_stacked_2d(const Context& ctx, const double* x, double t) {
    State2D st;
    st.mesh = &ctx.mesh2;
    st.t = t;
    const int nx = ctx.mesh2.x.n_cells, ny = ctx.mesh2.y.n_cells;
    st.E = FieldCoeffs2D(nx, ny, ctx.k);
    st.S = FieldCoeffs2D(nx, ny, ctx.k);
    st.T = FieldCoeffs2D(nx, ny, ctx.k);
    std::copy(x, x + ctx.block, st.E.data.data());
    std::copy(x + ctx.block, x + 2 * ctx.block, st.S.data.data());
    std::copy(x + 2 * ctx.block, x + 3 * ctx.block, st.T.data.data());
    return st;
}

std::unique_ptr<Context> build_context(const ExperimentConfig& cfg) {
    auto ctx = std::make_unique<Context>();
    ctx->dimension = cfg.dimension;
    ctx->k = cfg.degree;
    if (cfg.dimension == 1) {
        ctx->fields = 2;
        ctx->field_names = {"u", "v"};
        ctx->prob1 = make_problem_1d(cfg.problem);
        ctx->mesh1 = build_mesh_1d(ctx->prob1.xa, ctx->prob1.xb, cfg.nx);
        ctx->block = (cfg.degree + 1) * cfg.nx;
        const FluxParams1D flux{cfg.alpha, cfg.beta1, cfg.beta2};
        ctx->drift1 = std::make_unique<DriftOp1D>(ctx->mesh1, cfg.degree, flux);

        auto u0 = [&](double x) { return ctx->prob1.exact_u(x, 0.0, 0.0); };
        auto v0 = [&](double x) { return ctx->prob1.exact_v(x, 0.0, 0.0); };
        FieldCoeffs1D uc, vc;
        if (cfg.init == "projection") {
            auto [pu, pv] = global_projection_pair_1d(u0, v0, ctx->mesh1, cfg.degree, flux);
            uc = std::move(pu);
            vc = std::move(pv);
        } else {
            uc = l2_project_1d(u0, ctx->mesh1, cfg.degree);
            vc = l2_project_1d(v0, ctx->mesh1, cfg.degree);
        }
        ctx->x0.resize(2 * ctx->block);
        std::copy(uc.data.begin(), uc.data.end(), ctx->x0.begin());
        std::copy(vc.data.begin(), vc.data.end(), ctx->x0.begin() + ctx->block);

        if (ctx->prob1.noise.coupling) {
            verify_linear_structure(ctx->prob1.noise);
            const auto& c = *ctx->prob1.noise.coupling;
            ctx->coupling = std::make_unique<BlockCouplingOp>(
                2, ctx->block, std::vector<double>{c[0], c[1], c[2], c[3]});
        } else {
            Context* raw = ctx.get();
            ctx->general_noise = [raw](const double* x, double t, double* out) {
                const State1D st = state_from_stacked_1d(*raw, x, t);
                auto [gu, fv] = assemble_noise_1d(st, raw->prob1.noise);
                std::copy(gu.data.begin(), gu.data.end(), out);
                std::copy(fv.data.begin(), fv.data.end(), out + raw->block);
            };
        }
        ctx->sys.drift = ctx->drift1.get();
    } else {
        ctx->fields = 3;
        ctx->field_names = {"E", "S", "T"};
        ctx->prob2 = make_problem_2d(cfg.problem);
        ctx->mesh2 = build_mesh_2d(ctx->prob2.xa, ctx->prob2.xb, cfg.nx, ctx->prob2.ya,
                                   ctx->prob2.yb, cfg.ny);
        ctx->block = (cfg.degree + 1) * (cfg.degree + 1) * cfg.nx * cfg.ny;
        const FluxParams2D flux{cfg.alpha1, cfg.alpha2};
        ctx->drift2 = std::make_unique<DriftOp2D>(ctx->mesh2, cfg.degree, flux);

        auto e0 = [&](double x, double y) { return ctx->prob2.exact_E(x, y, 0.0, 0.0); };
        auto s0 = [&](double x, double y) { return ctx->prob2.exact_S(x, y, 0.0, 0.0); };
        auto t0 = [&](double x, double y) { return ctx->prob2.exact_T(x, y, 0.0, 0.0); };
        FieldCoeffs2D ec, sc, tc;
        if (cfg.init == "projection" && flux.projection_well_posed()) {
            // E -> P^{-a1,a2}, S -> P_y^{-a2}, T -> P_x^{a1}
            ec = radau_projection_2d(e0, ctx->mesh2, cfg.degree, -flux.alpha1, flux.alpha2);
            sc = radau_projection_2d(s0, ctx->mesh2, cfg.degree, std::nullopt, -flux.alpha2);
            tc = radau_projection_2d(t0, ctx->mesh2, cfg.degree, flux.alpha1, std::nullopt);
        } else {
            if (cfg.init == "projection")
                std::fprintf(stderr,
                             "smdg: alpha1/alpha2 = 0 makes the Radau projection ill-posed; "
                             "falling back to plain L2 initialization\n");
            ec = l2_project_2d(e0, ctx->mesh2, cfg.degree);
            sc = l2_project_2d(s0, ctx->mesh2, cfg.degree);
            tc = l2_project_2d(t0, ctx->mesh2, cfg.degree);
        }
        ctx->x0.resize(3 * ctx->block);
        std::copy(ec.data.begin(), ec.data.end(), ctx->x0.begin());
        std::copy(sc.data.begin(), sc.data.end(), ctx->x0.begin() + ctx->block);
        std::copy(tc.data.begin(), tc.data.end(), ctx->x0.begin() + 2 * ctx->block);

        if (ctx->prob2.noise.coupling) {
            verify_linear_structure_2d(ctx->prob2.noise);
            const auto& c = *ctx->prob2.noise.coupling;
            ctx->coupling = std::make_unique<BlockCouplingOp>(
                3, ctx->block, std::vector<double>(c.begin(), c.end()));
        } else {
            Context* raw = ctx.get();
            ctx->general_noise = [raw](const double* x, double t, double* out) {
                const State2D st = state_from_stacked_2d(*raw, x, t);
                auto [pf, pg, pr] = assemble_noise_2d(st, raw->prob2.noise);
                std::copy(pf.data.begin(), pf.data.end(), out);
                std::copy(pg.data.begin(), pg.data.end(), out + raw->block);
                std::copy(pr.data.begin(), pr.data.end(), out + 2 * raw->block);
            };
        }
        ctx->sys.drift = ctx->drift2.get();
    }
    ctx->sys.dim = ctx->fields * ctx->block;
    ctx->sys.diffusion_linear = ctx->coupling.get();
    ctx->sys.diffusion_general = ctx->general_noise;
    return ctx;
}

SampleResult run_one(const Context& ctx, const ExperimentConfig& cfg, int sample_index,
                     int substeps_per_step) {
    SampleResult res;
    res.stream_key = derive_stream_key(cfg.seed, static_cast<std::uint64_t>(sample_index));
    GaussianSeq rng{GaussianStream(res.stream_key)};
    res.energy.reserve(cfg.nt + 1);

    std::vector<double> final_state;
    double w_final = 0.0;
    try {
        integrate_observed(ctx.x0, ctx.sys, cfg.final_time, cfg.nt, cfg.scheme_choice(),
                           rng, substeps_per_step,
                           [&](int step, const std::vector<double>& x, double w) {
                               res.energy.push_back(
                                   kernels::active().sumsq(x.data(), x.size()));
                               if (step == cfg.nt) {
                                   final_state = x;
                                   w_final = w;
                               }
                           });
    } catch (const error& e) {
        throw divergence_error("sample " + std::to_string(sample_index) + " (stream key " +
                               std::to_string(res.stream_key) + "): " + e.what());
    }
    res.w_final = w_final;

    const double T = cfg.final_time;
    if (ctx.dimension == 1) {
        const State1D st = state_from_stacked_1d(ctx, final_state.data(), T);
        auto [eu, ev] = l2_error_1d(
            st, [&](double x) { return ctx.prob1.exact_u(x, T, w_final); },
            [&](double x) { return ctx.prob1.exact_v(x, T, w_final); });
        res.errors = {eu, ev};
    } else {
        const State2D st = state_from_stacked_2d(ctx, final_state.data(), T);
        auto [ee, es, et] = l2_error_2d(
            st, [&](double x, double y) { return ctx.prob2.exact_E(x, y, T, w_final); },
            [&](double x, double y) { return ctx.prob2.exact_S(x, y, T, w_final); },
            [&](double x, double y) { return ctx.prob2.exact_T(x, y, T, w_final); });
        res.errors = {ee, es, et};
    }
    return res;
}

std::vector<double> bootstrap_se(const std::vector<std::vector<double>>& sq_errors,
                                 std::uint64_t seed, int n_boot = 200) {
    const int fields = static_cast<int>(sq_errors.size());
    const int n = static_cast<int>(sq_errors[0].size());
    const GaussianStream pick(derive_stream_key(seed, 0xB007ull));
    std::vector<double> se(fields, 0.0);
    for (int f = 0; f < fields; ++f) {
        double sum = 0.0, sum2 = 0.0;
        for (int b = 0; b < n_boot; ++b) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                const std::uint64_t idx = static_cast<std::uint64_t>(b) * n + i;
                const int j = std::min(n - 1, static_cast<int>(pick.uniform(idx) * n));
                acc += sq_errors[f][j];
            }
            const double rms_b = std::sqrt(acc / n);
            sum += rms_b;
            sum2 += rms_b * rms_b;
        }
        const double mean = sum / n_boot;
        se[f] = std::sqrt(std::max(0.0, sum2 / n_boot - mean * mean));
    }
    return se;
}

MCResult mc_run(const ExperimentConfig& cfg, int substeps_per_step) {
    cfg.validate();
    const auto ctx = build_context(cfg);
    const int fields = ctx->fields;

    std::vector<SampleResult> results(cfg.samples);
    run_parallel(cfg.samples, cfg.threads,
                 [&](int i) { results[i] = run_one(*ctx, cfg, i, substeps_per_step); });

    MCResult out;
    out.fields = ctx->field_names;
    out.samples = cfg.samples;
    out.initial_energy = kernels::active().sumsq(ctx->x0.data(), ctx->x0.size());
    out.times.resize(cfg.nt + 1);
    for (int n = 0; n <= cfg.nt; ++n) out.times[n] = cfg.final_time * n / cfg.nt;

    std::vector<std::vector<double>> sq(fields, std::vector<double>(cfg.samples));
    out.mean_energy.assign(cfg.nt + 1, 0.0);
    out.sample_keys.resize(cfg.samples);
    for (int i = 0; i < cfg.samples; ++i) {
        for (int f = 0; f < fields; ++f) sq[f][i] = results[i].errors[f] * results[i].errors[f];
        for (int n = 0; n <= cfg.nt; ++n) out.mean_energy[n] += results[i].energy[n];
        out.sample_keys[i] = results[i].stream_key;
    }
    for (double& e : out.mean_energy) e /= cfg.samples;
    out.rms.resize(fields);
    for (int f = 0; f < fields; ++f) {
        double acc = 0.0;
        for (double s : sq[f]) acc += s;
        out.rms[f] = std::sqrt(acc / cfg.samples);
    }
    out.se = bootstrap_se(sq, cfg.seed);

    if (ctx->coupling) {
        const bool beta_free = (cfg.dimension == 2) || (cfg.beta1 == 0.0 && cfg.beta2 == 0.0);
        if (beta_free)
            if (auto rate = ctx->coupling->isometry_rate()) out.energy_growth_rate = rate;
    }
    return out;
}

} // namespace

void ExperimentConfig::validate() const {
    if (dimension != 1 && dimension != 2)
        throw config_error("dimension must be 1 or 2");
    if (nx < 1 || nt < 1 || (dimension == 2 && ny < 1))
        throw config_error("nx, ny, nt must be positive");
    if (degree < 0) throw config_error("degree must be >= 0");
    if (!(final_time > 0.0)) throw config_error("final_time must be positive");
    if (samples < 1) throw config_error("samples must be >= 1");
    if (substeps < 1) throw config_error("substeps must be >= 1");
    if (threads < 0) throw config_error("threads must be >= 0");
    if (beta1 < 0.0 || beta2 < 0.0)
        throw config_error("beta1 and beta2 must be >= 0: the semi-discrete energy law "
                           "requires beta1, beta2 >= 0");
    if (scheme != "taylor2" && scheme != "euler_maruyama")
        throw config_error("scheme must be 'taylor2' or 'euler_maruyama'");
    if (init != "projection" && init != "l2")
        throw config_error("init must be 'projection' or 'l2'");
    if (dimension == 1 && init == "projection") {
        const FluxParams1D flux{alpha, beta1, beta2};
        if (!flux.projection_well_posed())
            throw config_error("init='projection' needs alpha^2 + beta1*beta2 != 0 "
                               "(well-posedness of the global projection pair)");
    }
    const auto names = problem_names(dimension);
    if (std::find(names.begin(), names.end(), problem) == names.end())
        throw config_error("unknown problem '" + problem + "' for dimension " +
                           std::to_string(dimension));
}

SchemeChoice ExperimentConfig::scheme_choice() const {
    return scheme == "taylor2" ? SchemeChoice::Taylor20 : SchemeChoice::EulerMaruyama;
}

SampleResult run_sample(const ExperimentConfig& config, int sample_index) {
    config.validate();
    const auto ctx = build_context(config);
    return run_one(*ctx, config, sample_index, config.substeps);
}

MCResult monte_carlo(const ExperimentConfig& config) {
    return mc_run(config, config.substeps);
}

StateDump sample0_states(const ExperimentConfig& config) {
    config.validate();
    const auto ctx = build_context(config);
    StateDump dump;
    dump.initial = ctx->x0;
    GaussianSeq rng{GaussianStream(derive_stream_key(config.seed, 0))};
    integrate_observed(ctx->x0, ctx->sys, config.final_time, config.nt,
                       config.scheme_choice(), rng, config.substeps,
                       [&](int step, const std::vector<double>& x, double) {
                           if (step == config.nt) dump.final_sample0 = x;
                       });
    return dump;
}

ConvergenceReport convergence_study(const ExperimentConfig& config) {
    config.validate();
    if (config.levels < 2) throw config_error("convergence study needs at least 2 levels");
    const int L = config.levels;
    const long fine_nt = static_cast<long>(config.nt) << (L - 1);
    const long total_sub = fine_nt * config.substeps;

    ConvergenceReport rep;
    rep.samples = config.samples;
    rep.seed = config.seed;
    for (int lev = 0; lev < L; ++lev) {
        ExperimentConfig c = config;
        c.nx = config.nx << lev;
        c.ny = config.ny << lev;
        c.nt = config.nt << lev;
        const int per_step = static_cast<int>(total_sub / c.nt);
        const MCResult r = mc_run(c, per_step);
        if (lev == 0) rep.fields = r.fields;
        ConvergenceLevel level;
        level.nx = c.nx;
        level.ny = (config.dimension == 2) ? c.ny : 0;
        level.nt = c.nt;
        level.rms = r.rms;
        level.se = r.se;
        level.rate.assign(r.rms.size(), 0.0);
        if (lev > 0)
            for (size_t f = 0; f < r.rms.size(); ++f)
                level.rate[f] = std::log2(rep.levels.back().rms[f] / r.rms[f]);
        rep.levels.push_back(std::move(level));
    }
    return rep;
}

OrderCheckResult order_check(const ExperimentConfig& config) {
    if (config.samples < 1) throw config_error("samples must be >= 1");
    const int n_levels = std::max(2, config.levels);
    const double T = config.final_time;
    const int nt0 = 4;
    const long fine_nt = static_cast<long>(nt0) << (n_levels - 1);
    const long total_sub = fine_nt * config.substeps;

    const DenseOp A(1, {config.gbm_a});
    const DenseOp B(1, {config.gbm_b});
    SDESystem sys;
    sys.drift = &A;
    sys.diffusion_linear = &B;
    sys.dim = 1;

    OrderCheckResult res;
    res.taus.resize(n_levels);
    res.err_taylor.assign(n_levels, 0.0);
    res.err_em.assign(n_levels, 0.0);
    std::vector<double> acc_t(n_levels, 0.0), acc_e(n_levels, 0.0);

    for (int s = 0; s < config.samples; ++s) {
        const std::uint64_t key = derive_stream_key(config.seed, s);
        for (int lev = 0; lev < n_levels; ++lev) {
            const int nt = nt0 << lev;
            const int per_step = static_cast<int>(total_sub / nt);
            for (const SchemeChoice scheme : {SchemeChoice::Taylor20, SchemeChoice::EulerMaruyama}) {
                GaussianSeq rng{GaussianStream(key)};
                std::vector<double> x = {config.gbm_x0};
                std::vector<double> xn(1);
                TaylorWorkspace ws;
                double w = 0.0;
                const double tau = T / nt;
                for (int n = 0; n < nt; ++n) {
                    const PathIncrements inc = sample_increments(tau, per_step, rng);
                    if (scheme == SchemeChoice::Taylor20)
                        taylor2_step(x.data(), xn.data(), sys, inc, ws);
                    else
                        euler_maruyama_step(x.data(), xn.data(), sys, inc, n * tau, ws);
                    x.swap(xn);
                    w += inc.dW;
                }
                const double exact =
                    config.gbm_x0 *
                    std::exp((config.gbm_a - 0.5 * config.gbm_b * config.gbm_b) * T +
                             config.gbm_b * w);
                const double d = x[0] - exact;
                if (scheme == SchemeChoice::Taylor20)
                    acc_t[lev] += d * d;
                else
                    acc_e[lev] += d * d;
            }
        }
    }
    double sx = 0, sxx = 0, syt = 0, sxyt = 0, sye = 0, sxye = 0;
    for (int lev = 0; lev < n_levels; ++lev) {
        res.taus[lev] = T / (nt0 << lev);
        res.err_taylor[lev] = std::sqrt(acc_t[lev] / config.samples);
        res.err_em[lev] = std::sqrt(acc_e[lev] / config.samples);
        const double lx = std::log2(res.taus[lev]);
        sx += lx;
        sxx += lx * lx;
        syt += std::log2(res.err_taylor[lev]);
        sxyt += lx * std::log2(res.err_taylor[lev]);
        sye += std::log2(res.err_em[lev]);
        sxye += lx * std::log2(res.err_em[lev]);
    }
    const double denom = n_levels * sxx - sx * sx;
    res.slope_taylor = (n_levels * sxyt - sx * syt) / denom;
    res.slope_em = (n_levels * sxye - sx * sye) / denom;
    return res;
}

} // namespace smdg
