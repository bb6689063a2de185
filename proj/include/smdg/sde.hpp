#pragma once

#include <functional>
#include <span>
#include <vector>

#include "smdg/linalg.hpp"
#include "smdg/rng.hpp"

namespace smdg {

// One time step's stochastic data. dZ = int (W_s - W_{t_n}) ds and
// dU = int (W_s - W_{t_n})^2 ds are computed from the fine sub-path by a
// trapezoidal solve of the auxiliary system dx = dv, dy = x ds, dz = x^2 ds;
// dW is the exact sum of the sub-increments.
struct PathIncrements {
    double tau = 0.0;
    double dW = 0.0;
    double dZ = 0.0;
    double dU = 0.0;
    std::vector<double> fine; // sub-increments, sum == dW
};

// Build increments from M i.i.d. N(0, tau/M) sub-increments drawn from rng.
PathIncrements sample_increments(double tau, int substeps, GaussianSeq& rng);

// Assemble increments directly from given sub-increments (path coupling).
PathIncrements increments_from_subpath(double tau, const double* sub, int count);

// Concatenate consecutive steps into one coarser step over the same path.
PathIncrements merge_increments(const PathIncrements* steps, int count);

// dX = a(X) dt + b(X) dW_t. Diffusion is either a linear operator (enables
// Taylor 2.0) or a general state/time-dependent coefficient (Euler-Maruyama
// only).
struct SDESystem {
    const LinOp* drift = nullptr;
    const LinOp* diffusion_linear = nullptr;
    std::function<void(const double* x, double t, double* out)> diffusion_general;
    int dim = 0;
};

// Scratch vectors for the operator compositions of one Taylor step.
struct TaylorWorkspace {
    std::vector<double> buf;
    double* lane(int i, int dim) { return buf.data() + static_cast<size_t>(i) * dim; }
    void ensure(int dim) {
        if (buf.size() < static_cast<size_t>(11) * dim) buf.assign(static_cast<size_t>(11) * dim, 0.0);
    }
};

// Strong Taylor 2.0 update specialized to linear coefficients a(X)=AX,
// b(X)=BX. Throws unsupported_scheme_error for general diffusion.
void taylor2_step(const double* x, double* out, const SDESystem& sys,
                  const PathIncrements& inc, TaylorWorkspace& ws);

// X + a(X) tau + b(X) dW; serves general diffusion too.
void euler_maruyama_step(const double* x, double* out, const SDESystem& sys,
                         const PathIncrements& inc, double t, TaylorWorkspace& ws);

enum class SchemeChoice { Taylor20, EulerMaruyama };

struct PathResult {
    std::vector<std::vector<double>> states; // n_steps + 1 entries
    std::vector<double> w_values;            // realized W_{t_n}, n = 0..n_steps
};

// Uniform steps tau = T/n_steps, `substeps` Gaussian sub-increments per step.
// Checks for non-finite states and throws divergence_error with step index.
PathResult integrate_path(const std::vector<double>& x0, const SDESystem& sys,
                          double final_time, int n_steps, SchemeChoice scheme,
                          GaussianSeq& rng, int substeps = 100);

// Streaming variant: observer(step_index, state, W) is called at step 0
// (initial state) and after every step; states are not stored.
void integrate_observed(
    const std::vector<double>& x0, const SDESystem& sys, double final_time,
    int n_steps, SchemeChoice scheme, GaussianSeq& rng, int substeps,
    const std::function<void(int, const std::vector<double>&, double)>& observer);

} // namespace smdg
