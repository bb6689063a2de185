#include <doctest.h>

#include <cmath>
#include <vector>

#include "smdg/errors.hpp"
#include "smdg/linalg.hpp"
#include "smdg/rng.hpp"
#include "smdg/sde.hpp"

using namespace smdg;

namespace {

// dense 2x2 helpers for the one-step expansion oracle
using M2 = std::array<double, 4>;
M2 mul(const M2& a, const M2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}
std::array<double, 2> mv(const M2& a, const std::array<double, 2>& x) {
    return {a[0] * x[0] + a[1] * x[1], a[2] * x[0] + a[3] * x[1]};
}

} // namespace

TEST_CASE("increments from an all-zero sub-path vanish") {
    std::vector<double> zeros(64, 0.0);
    const auto inc = increments_from_subpath(0.25, zeros.data(), 64);
    CHECK(inc.dW == 0.0);
    CHECK(inc.dZ == 0.0);
    CHECK(inc.dU == 0.0);
}

TEST_CASE("sampled increments: path consistency and determinism") {
    GaussianSeq rng{GaussianStream(derive_stream_key(42, 0))};
    const auto inc = sample_increments(0.125, 100, rng);
    double sum = 0.0;
    for (double s : inc.fine) sum += s;
    CHECK(inc.dW == doctest::Approx(sum).epsilon(1e-12));
    CHECK(inc.dU >= 0.0);
    CHECK(inc.fine.size() == 100);

    GaussianSeq rng2{GaussianStream(derive_stream_key(42, 0))};
    const auto inc2 = sample_increments(0.125, 100, rng2);
    CHECK(inc.dW == inc2.dW); // bit-identical under the same seed
    CHECK(inc.dZ == inc2.dZ);
    CHECK(inc.dU == inc2.dU);
}

TEST_CASE("increment moments match the Ito values") {
    // E[dW^2]=tau, Var[dZ]=tau^3/3, Cov[dW,dZ]=tau^2/2, E[dU]=tau^2/2;
    // checked for the production substep count and for a fine-path M=1e4
    // brute-force sampler.
    const double tau = 0.2;
    for (int M : {100, 10000}) {
        const int n = (M == 100) ? 20000 : 2000;
        GaussianSeq rng{GaussianStream(derive_stream_key(7, M))};
        double sw2 = 0, sz = 0, sz2 = 0, swz = 0, su = 0;
        for (int i = 0; i < n; ++i) {
            const auto inc = sample_increments(tau, M, rng);
            sw2 += inc.dW * inc.dW;
            sz += inc.dZ;
            sz2 += inc.dZ * inc.dZ;
            swz += inc.dW * inc.dZ;
            su += inc.dU;
        }
        const double ew2 = sw2 / n;
        const double vz = sz2 / n - (sz / n) * (sz / n);
        const double cwz = swz / n;
        const double eu = su / n;
        // ~5 sigma Monte Carlo bands
        CHECK(ew2 == doctest::Approx(tau).epsilon(5.0 * std::sqrt(2.0 / n)));
        CHECK(vz == doctest::Approx(tau * tau * tau / 3).epsilon(5.0 * std::sqrt(2.0 / n) + 0.01));
        CHECK(cwz == doctest::Approx(tau * tau / 2).epsilon(5.0 * std::sqrt(3.0 / n)));
        CHECK(eu == doctest::Approx(tau * tau / 2).epsilon(5.0 * std::sqrt(4.0 / n)));
    }
}

TEST_CASE("merging increments preserves the path") {
    GaussianSeq rng{GaussianStream(derive_stream_key(3, 1))};
    const auto a = sample_increments(0.1, 50, rng);
    const auto b = sample_increments(0.1, 50, rng);
    const PathIncrements two[2] = {a, b};
    const auto merged = merge_increments(two, 2);
    CHECK(merged.tau == doctest::Approx(0.2));
    CHECK(merged.dW == doctest::Approx(a.dW + b.dW).epsilon(1e-14));
    CHECK(merged.fine.size() == 100);
    // dZ of the merged step: int over [0,2h] of W; second half shifts by W(h)
    CHECK(merged.dZ == doctest::Approx(a.dZ + b.dZ + 0.1 * a.dW).epsilon(1e-12));
}

TEST_CASE("taylor2 with zero diffusion is the deterministic order-2 Taylor step") {
    const DenseOp A(2, {0.0, 1.0, -1.0, 0.0});
    const DenseOp B(2, {0.0, 0.0, 0.0, 0.0});
    SDESystem sys{&A, &B, nullptr, 2};
    PathIncrements inc;
    inc.tau = 0.01;
    inc.dW = 0.37; // must be ignored by every surviving term through B = 0
    inc.dZ = 0.001;
    inc.dU = 0.0001;
    const std::vector<double> x = {1.0, 2.0};
    std::vector<double> out(2);
    TaylorWorkspace ws;
    taylor2_step(x.data(), out.data(), sys, inc, ws);
    // X + tau A X + tau^2/2 A^2 X
    const std::array<double, 2> ax = {x[1], -x[0]};
    const std::array<double, 2> aax = {-x[0], -x[1]};
    for (int i = 0; i < 2; ++i)
        CHECK(out[i] == doctest::Approx(x[i] + inc.tau * ax[i] +
                                        0.5 * inc.tau * inc.tau * aax[i])
                            .epsilon(1e-14));
}

TEST_CASE("one taylor2 step matches the explicit ten-term expansion") {
    const M2 Am = {0.0, 1.0, -1.0, 0.0};
    const M2 Bm = {0.3, 0.1, 0.0, 0.2};
    const DenseOp A(2, {Am[0], Am[1], Am[2], Am[3]});
    const DenseOp B(2, {Bm[0], Bm[1], Bm[2], Bm[3]});
    SDESystem sys{&A, &B, nullptr, 2};

    const double tau = 0.01;
    PathIncrements inc;
    inc.tau = tau;
    inc.dW = std::sqrt(tau);
    inc.dZ = 0.5 * std::pow(tau, 1.5);
    inc.dU = tau * tau / 3.0;

    const std::array<double, 2> x = {0.7, -1.3};
    std::vector<double> out(2);
    TaylorWorkspace ws;
    taylor2_step(x.data(), out.data(), sys, inc, ws);

    // expansion assembled from explicit matrix products
    const M2 AA = mul(Am, Am), AB = mul(Am, Bm), BA = mul(Bm, Am), BB = mul(Bm, Bm);
    const M2 BBB = mul(Bm, BB), BBBB = mul(Bm, BBB);
    const M2 BAB = mul(Bm, AB), ABB = mul(Am, BB), BBA = mul(BB, Am);
    const double dW = inc.dW, dZ = inc.dZ, dU = inc.dU;
    std::array<double, 2> expect = x;
    auto add = [&](const M2& m, double c) {
        const auto y = mv(m, x);
        expect[0] += c * y[0];
        expect[1] += c * y[1];
    };
    add(Am, tau);
    add(Bm, dW);
    add(BB, 0.5 * (dW * dW - tau));
    add(AA, 0.5 * tau * tau);
    add(BA, dW * tau - dZ);
    add(AB, dZ);
    add(BBB, (dW * dW - 3 * tau) * dW / 6.0);
    add(BAB, -dU + dW * dZ);
    add(ABB, 0.5 * dU - 0.25 * tau * tau);
    add(BBA, 0.5 * dU - dW * dZ + 0.5 * dW * dW * tau - 0.25 * tau * tau);
    add(BBBB, (std::pow(dW, 4) - 6 * dW * dW * tau + 3 * tau * tau) / 24.0);

    CHECK(out[0] == doctest::Approx(expect[0]).epsilon(1e-14));
    CHECK(out[1] == doctest::Approx(expect[1]).epsilon(1e-14));
}

TEST_CASE("euler-maruyama basics") {
    const DenseOp A(1, {0.0});
    const DenseOp B(1, {1.0});
    SDESystem sys{&A, &B, nullptr, 1};
    PathIncrements inc;
    inc.tau = 0.1;
    inc.dW = 0.0;
    const std::vector<double> x = {1.5};
    std::vector<double> out(1);
    TaylorWorkspace ws;
    euler_maruyama_step(x.data(), out.data(), sys, inc, 0.0, ws);
    CHECK(out[0] == 1.5); // zero increments, zero drift -> identity

    // agrees with taylor2 to O(tau) on one step
    const DenseOp A2(1, {0.8});
    SDESystem sys2{&A2, &B, nullptr, 1};
    inc.dW = 0.05;
    inc.dZ = 0.002;
    inc.dU = 0.0005;
    std::vector<double> em(1), ty(1);
    euler_maruyama_step(x.data(), em.data(), sys2, inc, 0.0, ws);
    taylor2_step(x.data(), ty.data(), sys2, inc, ws);
    // the leading discrepancy is the O(tau) Ito correction b^2 X ((dW)^2-tau)/2
    CHECK(std::abs(em[0] - ty[0]) < 1.5 * inc.tau);
}

TEST_CASE("taylor2 refuses general diffusion") {
    const DenseOp A(1, {1.0});
    SDESystem sys;
    sys.drift = &A;
    sys.dim = 1;
    sys.diffusion_general = [](const double* x, double, double* out) { out[0] = x[0] * x[0]; };
    PathIncrements inc;
    inc.tau = 0.1;
    const std::vector<double> x = {1.0};
    std::vector<double> out(1);
    TaylorWorkspace ws;
    CHECK_THROWS_AS(taylor2_step(x.data(), out.data(), sys, inc, ws),
                    unsupported_scheme_error);
    CHECK_NOTHROW(euler_maruyama_step(x.data(), out.data(), sys, inc, 0.0, ws));
}

TEST_CASE("integrate_path: telescoping W and constant trajectories") {
    const DenseOp A(2, {0.0, 0.0, 0.0, 0.0});
    const DenseOp B(2, {0.0, 0.0, 0.0, 0.0});
    SDESystem sys{&A, &B, nullptr, 2};
    GaussianSeq rng{GaussianStream(derive_stream_key(11, 0))};
    const auto res = integrate_path({1.0, -2.0}, sys, 1.0, 16, SchemeChoice::Taylor20, rng, 10);
    REQUIRE(res.states.size() == 17);
    for (const auto& s : res.states) {
        CHECK(s[0] == 1.0);
        CHECK(s[1] == -2.0);
    }
    // W telescopes exactly over the recorded increments
    GaussianSeq rng2{GaussianStream(derive_stream_key(11, 0))};
    double w = 0.0;
    for (int n = 0; n < 16; ++n) {
        const auto inc = sample_increments(1.0 / 16, 10, rng2);
        w += inc.dW;
        CHECK(res.w_values[n + 1] == doctest::Approx(w).epsilon(1e-15));
    }
}

TEST_CASE("integrate_path detects divergence") {
    const DenseOp A(1, {200.0}); // wildly unstable with tau = 0.5
    const DenseOp B(1, {0.0});
    SDESystem sys{&A, &B, nullptr, 1};
    GaussianSeq rng{GaussianStream(derive_stream_key(1, 1))};
    CHECK_THROWS_AS(integrate_path({1.0}, sys, 50.0, 100, SchemeChoice::Taylor20, rng, 4),
                    divergence_error);
}

TEST_CASE("strong order on GBM: taylor2 near 2, euler-maruyama near 0.5") {
    const double a = 1.0, b = 0.5, x0 = 1.0, T = 1.0;
    const DenseOp A(1, {a});
    const DenseOp B(1, {b});
    SDESystem sys{&A, &B, nullptr, 1};
    const int n_samples = 400, n_levels = 3, nt0 = 8, M = 64;
    const long total_sub = static_cast<long>(nt0 << (n_levels - 1)) * M;

    std::vector<double> errT(n_levels, 0.0), errE(n_levels, 0.0);
    for (int s = 0; s < n_samples; ++s) {
        const std::uint64_t key = derive_stream_key(2024, s);
        for (int lev = 0; lev < n_levels; ++lev) {
            const int nt = nt0 << lev;
            const int per = static_cast<int>(total_sub / nt);
            for (int scheme = 0; scheme < 2; ++scheme) {
                GaussianSeq rng{GaussianStream(key)};
                std::vector<double> x = {x0}, xn(1);
                TaylorWorkspace ws;
                double w = 0.0;
                for (int n = 0; n < nt; ++n) {
                    const auto inc = sample_increments(T / nt, per, rng);
                    if (scheme == 0)
                        taylor2_step(x.data(), xn.data(), sys, inc, ws);
                    else
                        euler_maruyama_step(x.data(), xn.data(), sys, inc, n * T / nt, ws);
                    x.swap(xn);
                    w += inc.dW;
                }
                const double exact = x0 * std::exp((a - 0.5 * b * b) * T + b * w);
                const double d = x[0] - exact;
                (scheme == 0 ? errT[lev] : errE[lev]) += d * d;
            }
        }
    }
    for (int lev = 0; lev < n_levels; ++lev) {
        errT[lev] = std::sqrt(errT[lev] / n_samples);
        errE[lev] = std::sqrt(errE[lev] / n_samples);
    }
    const double slopeT = std::log2(errT[0] / errT[n_levels - 1]) / (n_levels - 1);
    const double slopeE = std::log2(errE[0] / errE[n_levels - 1]) / (n_levels - 1);
    CHECK(slopeT > 1.6);
    CHECK(slopeE > 0.3);
    CHECK(slopeE < 0.8);
}

TEST_CASE("coupled-path refinement: rotation system with commuting noise") {
    // dX = omega J X dt + c X dW has the closed form
    // X_t = R(omega t) X_0 exp(c W_t - c^2 t / 2); halving tau on a shared
    // path divides the taylor2 error by ~4.
    const double omega = 1.0, c = 0.6, T = 1.0;
    const DenseOp A(2, {0.0, omega, -omega, 0.0});
    const DenseOp B(2, {c, 0.0, 0.0, c});
    SDESystem sys{&A, &B, nullptr, 2};
    const std::vector<double> x0 = {1.0, 0.5};

    const int n_samples = 200, M = 32;
    const int nts[3] = {8, 16, 32};
    const long total_sub = 32L * M;
    double err[3] = {0, 0, 0};
    for (int s = 0; s < n_samples; ++s) {
        const std::uint64_t key = derive_stream_key(77, s);
        for (int lev = 0; lev < 3; ++lev) {
            const int nt = nts[lev];
            GaussianSeq rng{GaussianStream(key)};
            std::vector<double> x = x0, xn(2);
            TaylorWorkspace ws;
            double w = 0.0;
            for (int n = 0; n < nt; ++n) {
                const auto inc = sample_increments(T / nt, static_cast<int>(total_sub / nt), rng);
                taylor2_step(x.data(), xn.data(), sys, inc, ws);
                x.swap(xn);
                w += inc.dW;
            }
            const double g = std::exp(c * w - 0.5 * c * c * T);
            const double ex = (std::cos(omega * T) * x0[0] + std::sin(omega * T) * x0[1]) * g;
            const double ey = (-std::sin(omega * T) * x0[0] + std::cos(omega * T) * x0[1]) * g;
            err[lev] += (x[0] - ex) * (x[0] - ex) + (x[1] - ey) * (x[1] - ey);
        }
    }
    for (double& e : err) e = std::sqrt(e / n_samples);
    CHECK(std::log2(err[0] / err[1]) > 1.6);
    CHECK(std::log2(err[1] / err[2]) > 1.6);
}
