#pragma once

#include <functional>
#include <vector>

#include "smdg/mesh.hpp"
#include "smdg/quadrature.hpp"

namespace smdg {

// Modal coefficients of one scalar DG field. The basis on cell j is the
// per-cell normalized orthonormal Legendre family
//   phi_j^l(x) = sqrt(2/h_j) * phi_l(xi(x)),
// so the mass matrix is the identity and ||w_h||_{L2}^2 equals the squared
// Euclidean norm of the coefficients.
//
// Storage is mode-major: data[l*n + j] holds mode l of cell j. That keeps
// every per-mode operation contiguous over cells for the SIMD kernels.
struct FieldCoeffs1D {
    int n = 0; // cells
    int k = 0; // polynomial degree
    std::vector<double> data;

    FieldCoeffs1D() = default;
    FieldCoeffs1D(int n_, int k_) : n(n_), k(k_), data((k_ + 1) * n_, 0.0) {}
    double& at(int l, int j) { return data[l * n + j]; }
    double at(int l, int j) const { return data[l * n + j]; }
    int size() const { return (k + 1) * n; }
};

// Tensor-product field on a rectangular mesh. Storage index:
//   data[((ly*(k+1) + lx)*ny + cy)*nx + cx]
// i.e. y-mode outermost, x-cell innermost. CSV dumps use the documented
// per-cell ordering mode = lx*(k+1) + ly instead (see cli module).
struct FieldCoeffs2D {
    int nx = 0, ny = 0;
    int k = 0;
    std::vector<double> data;

    FieldCoeffs2D() = default;
    FieldCoeffs2D(int nx_, int ny_, int k_)
        : nx(nx_), ny(ny_), k(k_), data((k_ + 1) * (k_ + 1) * nx_ * ny_, 0.0) {}
    double& at(int ly, int lx, int cy, int cx) {
        return data[((ly * (k + 1) + lx) * ny + cy) * nx + cx];
    }
    double at(int ly, int lx, int cy, int cx) const {
        return data[((ly * (k + 1) + lx) * ny + cy) * nx + cx];
    }
    int size() const { return (k + 1) * (k + 1) * nx * ny; }
};

// phi_l(node_q) for l=0..k over the rule's nodes, row-major [q][l].
std::vector<double> basis_at_nodes(int k, const Quadrature& q);

// Point evaluation. `coef` may point into a larger stacked state vector.
double eval_field_1d(const double* coef, const Mesh1D& mesh, int k, int cell, double xi);
double eval_field_2d(const double* coef, const TensorMesh2D& mesh, int k,
                     int cy, int cx, double xi_x, double xi_y);

// L2 projection onto V_h^k via an npts-point Gauss rule per cell
// (npts = k+2 integrates products of two basis polynomials exactly).
FieldCoeffs1D l2_project_1d(const std::function<double(double)>& fn,
                            const Mesh1D& mesh, int k, int npts = -1);
FieldCoeffs2D l2_project_2d(const std::function<double(double, double)>& fn,
                            const TensorMesh2D& mesh, int k, int npts = -1);

// ||w_h - fn||_{L2} by composite over-integration (npts points per direction).
double l2_distance_1d(const double* coef, const Mesh1D& mesh, int k,
                      const std::function<double(double)>& fn, int npts = -1);
double l2_distance_2d(const double* coef, const TensorMesh2D& mesh, int k,
                      const std::function<double(double, double)>& fn, int npts = -1);

} // namespace smdg
