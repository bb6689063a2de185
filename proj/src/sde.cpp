#include "smdg/sde.hpp"

#include <cmath>
#include <string>

#include "smdg/errors.hpp"
#include "smdg/kernels.hpp"

namespace smdg {

PathIncrements increments_from_subpath(double tau, const double* sub, int count) {
    PathIncrements inc;
    inc.tau = tau;
    inc.fine.assign(sub, sub + count);
    const double dt = tau / count;
    double w = 0.0, z = 0.0, u = 0.0;
    for (int i = 0; i < count; ++i) {
        const double w_next = w + sub[i];
        z += 0.5 * dt * (w + w_next);
        u += 0.5 * dt * (w * w + w_next * w_next);
        w = w_next;
    }
    inc.dW = w;
    inc.dZ = z;
    inc.dU = u;
    return inc;
}

PathIncrements sample_increments(double tau, int substeps, GaussianSeq& rng) {
    if (!(tau > 0.0)) throw config_error("sample_increments: tau must be positive");
    if (substeps < 1) throw config_error("sample_increments: need at least one substep");
    const double sd = std::sqrt(tau / substeps);
    std::vector<double> sub(substeps);
    for (int i = 0; i < substeps; ++i) sub[i] = sd * rng.next();
    return increments_from_subpath(tau, sub.data(), substeps);
}

PathIncrements merge_increments(const PathIncrements* steps, int count) {
    double tau = 0.0;
    std::vector<double> sub;
    for (int i = 0; i < count; ++i) {
        tau += steps[i].tau;
        sub.insert(sub.end(), steps[i].fine.begin(), steps[i].fine.end());
    }
    return increments_from_subpath(tau, sub.data(), static_cast<int>(sub.size()));
}

void taylor2_step(const double* x, double* out, const SDESystem& sys,
                  const PathIncrements& inc, TaylorWorkspace& ws) {
    if (!sys.diffusion_linear)
        throw unsupported_scheme_error(
            "Taylor 2.0 requires linear diffusion b(X) = BX; use Euler-Maruyama "
            "for general coefficients");
    const int n = sys.dim;
    ws.ensure(n);
    const LinOp& A = *sys.drift;
    const LinOp& B = *sys.diffusion_linear;

    double* tA = ws.lane(0, n);
    double* tB = ws.lane(1, n);
    double* tAA = ws.lane(2, n);
    double* tBA = ws.lane(3, n);   // B(AX)  -> L0 b
    double* tAB = ws.lane(4, n);   // A(BX)  -> L1 a
    double* tBB = ws.lane(5, n);   // B^2 X  -> L1 b
    double* tBBB = ws.lane(6, n);  // B^3 X
    double* tBBBB = ws.lane(7, n); // B^4 X
    double* tBAB = ws.lane(8, n);  // B A B X -> L1 L0 b
    double* tABB = ws.lane(9, n);  // A B^2 X -> L1 L1 a
    double* tBBA = ws.lane(10, n); // B^2 A X -> L0 L1 b

    A.apply(x, tA);
    B.apply(x, tB);
    A.apply(tA, tAA);
    B.apply(tA, tBA);
    A.apply(tB, tAB);
    B.apply(tB, tBB);
    B.apply(tBB, tBBB);
    B.apply(tBBB, tBBBB);
    B.apply(tAB, tBAB);
    A.apply(tBB, tABB);
    B.apply(tBA, tBBA);

    const double tau = inc.tau, dW = inc.dW, dZ = inc.dZ, dU = inc.dU;
    const double dW2 = dW * dW;
    const double cs[11] = {
        tau,                                                  // a
        dW,                                                   // b
        0.5 * tau * tau,                                      // L0 a
        tau * dW - dZ,                                        // L0 b
        dZ,                                                   // L1 a
        0.5 * (dW2 - tau),                                    // L1 b
        (dW2 - 3.0 * tau) * dW / 6.0,                         // L1 L1 b
        (dW2 * dW2 - 6.0 * dW2 * tau + 3.0 * tau * tau) / 24, // L1 L1 L1 b
        -dU + dW * dZ,                                        // L1 L0 b
        0.5 * dU - 0.25 * tau * tau,                          // L1 L1 a
        0.5 * dU - dW * dZ + 0.5 * dW2 * tau - 0.25 * tau * tau, // L0 L1 b
    };
    const double* ts[11] = {tA, tB, tAA, tBA, tAB, tBB, tBBB, tBBBB, tBAB, tABB, tBBA};
    kernels::active().lincomb(out, x, ts, cs, 11, n);
}

void euler_maruyama_step(const double* x, double* out, const SDESystem& sys,
                         const PathIncrements& inc, double t, TaylorWorkspace& ws) {
    const int n = sys.dim;
    ws.ensure(n);
    double* tA = ws.lane(0, n);
    double* tB = ws.lane(1, n);
    sys.drift->apply(x, tA);
    if (sys.diffusion_linear)
        sys.diffusion_linear->apply(x, tB);
    else
        sys.diffusion_general(x, t, tB);
    const double cs[2] = {inc.tau, inc.dW};
    const double* ts[2] = {tA, tB};
    kernels::active().lincomb(out, x, ts, cs, 2, n);
}

void integrate_observed(
    const std::vector<double>& x0, const SDESystem& sys, double final_time,
    int n_steps, SchemeChoice scheme, GaussianSeq& rng, int substeps,
    const std::function<void(int, const std::vector<double>&, double)>& observer) {
    if (n_steps < 1) throw config_error("integrate: need at least one step");
    if (static_cast<int>(x0.size()) != sys.dim)
        throw structural_error("integrate: state size does not match system dimension");
    const double tau = final_time / n_steps;
    const auto& K = kernels::active();

    std::vector<double> x = x0, xnext(x0.size());
    TaylorWorkspace ws;
    double w = 0.0;
    const double e0 = K.sumsq(x.data(), x.size());
    observer(0, x, w);
    for (int nstep = 1; nstep <= n_steps; ++nstep) {
        const PathIncrements inc = sample_increments(tau, substeps, rng);
        const double t = (nstep - 1) * tau;
        if (scheme == SchemeChoice::Taylor20)
            taylor2_step(x.data(), xnext.data(), sys, inc, ws);
        else
            euler_maruyama_step(x.data(), xnext.data(), sys, inc, t, ws);
        x.swap(xnext);
        w += inc.dW;
        const double e = K.sumsq(x.data(), x.size());
        if (!std::isfinite(e) || e > 1e12 * (e0 + 1.0))
            throw divergence_error("non-finite or exploding state at step " +
                                   std::to_string(nstep));
        observer(nstep, x, w);
    }
}

PathResult integrate_path(const std::vector<double>& x0, const SDESystem& sys,
                          double final_time, int n_steps, SchemeChoice scheme,
                          GaussianSeq& rng, int substeps) {
    PathResult res;
    res.states.reserve(n_steps + 1);
    res.w_values.reserve(n_steps + 1);
    integrate_observed(x0, sys, final_time, n_steps, scheme, rng, substeps,
                       [&](int, const std::vector<double>& x, double w) {
                           res.states.push_back(x);
                           res.w_values.push_back(w);
                       });
    return res;
}

} // namespace smdg
