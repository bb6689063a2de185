#pragma once

#include <array>
#include <functional>
#include <optional>
#include <utility>

#include "smdg/field.hpp"
#include "smdg/linalg.hpp"
#include "smdg/mesh.hpp"

namespace smdg {

// Generalized flux parameters:
//   u_hat = {u} + alpha [u] - beta1 [v],  v_hat = {v} - alpha [v] - beta2 [u].
// beta1, beta2 >= 0 is required by the energy law; the global projection pair
// additionally needs alpha^2 + beta1*beta2 != 0.
struct FluxParams1D {
    double alpha = 0.5;
    double beta1 = 0.0;
    double beta2 = 0.0;

    void validate() const;
    bool projection_well_posed() const {
        return alpha * alpha + beta1 * beta2 != 0.0;
    }
};

// dv = -u_x dt + f dW, du = -v_x dt + g dW with periodic boundary conditions.
struct State1D {
    const Mesh1D* mesh = nullptr;
    FieldCoeffs1D u;
    FieldCoeffs1D v;
    double t = 0.0;
};

// Multiplicative noise coefficients. The pointwise functions are always
// usable; `coupling`, when set, declares the exact linear structure
//   noise_u = g = C[0]*u + C[1]*v,   noise_v = f = C[2]*u + C[3]*v
// with constant coefficients (this is what makes Taylor 2.0 applicable).
struct NoiseSpec1D {
    std::function<double(double x, double t, double u, double v)> f;
    std::function<double(double x, double t, double u, double v)> g;
    std::optional<std::array<double, 4>> coupling;
};

// Checks a declared-linear noise by sampling: homogeneity, additivity, and
// agreement with the coupling matrix. Throws config_error on violation.
void verify_linear_structure(const NoiseSpec1D& noise, unsigned seed = 20'24);

// Deterministic right-hand side of the semi-discrete scheme, by direct
// quadrature-free assembly. Reference implementation: plain loops over cells,
// used as the oracle for DriftOp1D.
std::pair<FieldCoeffs1D, FieldCoeffs1D>
assemble_drift_1d(const State1D& state, const FluxParams1D& flux);

// The same linear operator in matrix-free form, acting on the stacked
// coefficient vector X = [u modes | v modes] (layout of FieldCoeffs1D.data,
// u block first). SIMD kernel implementation; immutable after construction.
class DriftOp1D final : public LinOp {
public:
    DriftOp1D(const Mesh1D& mesh, int degree, const FluxParams1D& flux);

    int dim() const override { return 2 * block_; }
    void apply(const double* x, double* y) const override;

    int degree() const { return k_; }
    int cells() const { return n_; }
    const FluxParams1D& flux() const { return flux_; }

private:
    int n_ = 0, k_ = 0, block_ = 0;
    FluxParams1D flux_;
    std::vector<double> inv_h2_;   // 2/h_j
    std::vector<double> s_;        // sqrt(2/h_j)
    std::vector<double> dtab_;     // derivative table, (k+1)^2
    std::vector<double> tp_, tm_;  // traces at +-1

    void directional(const double* p_other, const double* hat, double* out) const;
};

// L2 projections of the noise evaluated on the numerical solution:
// returns (P(g(.,t,u_h,v_h)), P(f(.,t,u_h,v_h))) — the diffusion coefficient
// pairing (du-noise, dv-noise).
std::pair<FieldCoeffs1D, FieldCoeffs1D>
assemble_noise_1d(const State1D& state, const NoiseSpec1D& noise);

// Global projection pair (P^{alpha,beta1} q, P^{-alpha,beta2} r): cell moment
// conditions against P^{k-1} plus coupled interface conditions at every edge.
// The moment rows are eliminated analytically (they coincide with the L2
// coefficients); the remaining 2N top-mode system is solved by a dense
// partial-pivot LU. Throws well_posedness_error when singular.
std::pair<FieldCoeffs1D, FieldCoeffs1D>
global_projection_pair_1d(const std::function<double(double)>& q,
                          const std::function<double(double)>& r,
                          const Mesh1D& mesh, int degree,
                          const FluxParams1D& flux);

// beta1 = beta2 = 0 special case: two independent single-field projections,
// each a cyclic bidiagonal solve in the top mode. Cross-check path.
std::pair<FieldCoeffs1D, FieldCoeffs1D>
global_projection_pair_decoupled_1d(const std::function<double(double)>& q,
                                    const std::function<double(double)>& r,
                                    const Mesh1D& mesh, int degree, double alpha);

// Single-field generalized Radau projection with interface condition
// ({P q} + a [P q])_{j+1/2} = q(x_{j+1/2}). Requires a != 0 for solvability
// on periodic meshes (up to parity exceptions caught by the solver).
FieldCoeffs1D radau_project_1d(const std::function<double(double)>& q,
                               const Mesh1D& mesh, int degree, double a);

// Data-driven form: `base` carries the cell moments (modes 0..k-1; mode k is
// ignored), edge_values[e] = q(x_{e+1/2}). Used by the 2D tensor projections.
FieldCoeffs1D radau_complete_1d(FieldCoeffs1D base,
                                const std::vector<double>& edge_values,
                                const Mesh1D& mesh, double a);

// Worst interface-condition residual of a projected pair (diagnostics/tests).
double projection_interface_residual_1d(const FieldCoeffs1D& pq,
                                        const FieldCoeffs1D& pr,
                                        const std::function<double(double)>& q,
                                        const std::function<double(double)>& r,
                                        const Mesh1D& mesh,
                                        const FluxParams1D& flux);

// ||u_h||^2 + ||v_h||^2 == squared Euclidean norm of the coefficients.
double discrete_energy_1d(const State1D& state);

// Per-field L2 errors against pointwise exact solutions (over-integrated with
// k+3 points per cell).
std::pair<double, double> l2_error_1d(const State1D& state,
                                      const std::function<double(double)>& exact_u,
                                      const std::function<double(double)>& exact_v);

} // namespace smdg
