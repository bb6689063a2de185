#pragma once

#include <array>
#include <functional>
#include <optional>
#include <tuple>

#include "smdg/field.hpp"
#include "smdg/linalg.hpp"
#include "smdg/mesh.hpp"

namespace smdg {

// Per-direction flux parameters for the rectangular-mesh scheme; the fluxes
// are q_hat = {q} + a [q] with a in {+-alpha1, +-alpha2} and no beta terms.
struct FluxParams2D {
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    bool projection_well_posed() const { return alpha1 != 0.0 && alpha2 != 0.0; }
};

// dE - T_x dt + S_y dt = f dW,  dS + E_y dt = g dW,  dT - E_x dt = r dW.
struct State2D {
    const TensorMesh2D* mesh = nullptr;
    FieldCoeffs2D E, S, T;
    double t = 0.0;
};

// coupling rows map (E,S,T) to (noise_E, noise_S, noise_T), row-major 3x3.
struct NoiseSpec2D {
    std::function<double(double x, double y, double t, double E, double S, double T)> f;
    std::function<double(double x, double y, double t, double E, double S, double T)> g;
    std::function<double(double x, double y, double t, double E, double S, double T)> r;
    std::optional<std::array<double, 9>> coupling;
};

void verify_linear_structure_2d(const NoiseSpec2D& noise, unsigned seed = 20'25);

// Reference assembly of the deterministic right-hand side (plain loops).
std::tuple<FieldCoeffs2D, FieldCoeffs2D, FieldCoeffs2D>
assemble_drift_2d(const State2D& state, const FluxParams2D& flux);

// Matrix-free drift operator on the stacked vector X = [E | S | T].
class DriftOp2D final : public LinOp {
public:
    DriftOp2D(const TensorMesh2D& mesh, int degree, const FluxParams2D& flux);

    int dim() const override { return 3 * block_; }
    void apply(const double* x, double* y) const override;

    int degree() const { return k_; }
    const FluxParams2D& flux() const { return flux_; }

private:
    int nx_ = 0, ny_ = 0, k_ = 0, nc_ = 0, block_ = 0;
    FluxParams2D flux_;
    std::vector<double> dtab_, tp_, tm_;
    std::vector<double> sx_rep_, sy_rep_;        // nc-sized per-cell sqrt(2/h)
    std::vector<double> ihx_rep_, ihy_rep_;      // nc-sized per-cell 2/h

    void x_sweep(const double* p, double a, double sign, double* out, double* ws) const;
    void y_sweep(const double* p, double a, double sign, double* out, double* ws) const;
};

// L2 projections of (f,g,r) evaluated on the numerical solution:
// the diffusion coefficients of the dE, dS, dT equations.
std::tuple<FieldCoeffs2D, FieldCoeffs2D, FieldCoeffs2D>
assemble_noise_2d(const State2D& state, const NoiseSpec2D& noise);

// Tensor-product projection: generalized Radau in a direction when its alpha
// is given ( {Pq} + a [Pq] = q at every edge of that direction ), plain L2
// otherwise. alpha = 0 in a projected direction is ill-posed and throws.
FieldCoeffs2D radau_projection_2d(const std::function<double(double, double)>& fn,
                                  const TensorMesh2D& mesh, int degree,
                                  std::optional<double> alpha_x,
                                  std::optional<double> alpha_y);

double discrete_energy_2d(const State2D& state);

std::tuple<double, double, double>
l2_error_2d(const State2D& state,
            const std::function<double(double, double)>& exact_E,
            const std::function<double(double, double)>& exact_S,
            const std::function<double(double, double)>& exact_T);

} // namespace smdg
