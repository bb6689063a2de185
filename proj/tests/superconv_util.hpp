#pragma once

// Shared by the unit and acceptance suites: the superconvergence functional
//   F(phi) = sum_ij int_{J_j} A_{I_i}(eps, phi; alpha_x) dy,
// eps = P^{ax,ay} w - w, assembled as a Riesz vector G so that
// sup_{||phi||=1} |F(phi)| = ||G||.

#include <cmath>
#include <functional>

#include "smdg/dg2d.hpp"
#include "smdg/kernels.hpp"
#include "smdg/legendre.hpp"

namespace smdg_test {

inline double superconvergence_functional_norm(
    const std::function<double(double, double)>& w, const smdg::TensorMesh2D& mesh, int k,
    double ax, double ay, smdg::FieldCoeffs2D* g_out = nullptr) {
    using namespace smdg;
    const auto pw = radau_projection_2d(w, mesh, k, ax, ay);
    const int n = mesh.x.n_cells, kp = k + 1;
    const auto quad = gauss_quadrature(k + 4);
    const auto tp = legendre_traces_right(k);
    const auto tm = legendre_traces_left(k);
    FieldCoeffs2D G(n, mesh.y.n_cells, k);
    for (int cy = 0; cy < mesh.y.n_cells; ++cy)
        for (int cx = 0; cx < n; ++cx) {
            const double hx = mesh.x.width(cx), hy = mesh.y.width(cy);
            const double sx = std::sqrt(2.0 / hx), sy = std::sqrt(2.0 / hy);
            for (int iy = 0; iy < quad.points(); ++iy)
                for (int ix = 0; ix < quad.points(); ++ix) {
                    const double xv = mesh.x.to_physical(cx, quad.nodes[ix]);
                    const double yv = mesh.y.to_physical(cy, quad.nodes[iy]);
                    const double eps = eval_field_2d(pw.data.data(), mesh, k, cy, cx,
                                                     quad.nodes[ix], quad.nodes[iy]) -
                                       w(xv, yv);
                    const double jac = 0.25 * hx * hy * quad.weights[ix] * quad.weights[iy];
                    for (int ly = 0; ly < kp; ++ly)
                        for (int lx = 0; lx < kp; ++lx) {
                            const double dphix =
                                sx * sy * legendre_eval(lx, quad.nodes[ix]).derivative *
                                (2.0 / hx) * legendre_eval(ly, quad.nodes[iy]).value;
                            G.at(ly, lx, cy, cx) += jac * eps * dphix;
                        }
                }
            for (int iy = 0; iy < quad.points(); ++iy) {
                const double yv = mesh.y.to_physical(cy, quad.nodes[iy]);
                auto eps_hat = [&](int edge_cell) {
                    const int cr = (edge_cell + 1) % n;
                    const double xe = mesh.x.edges[edge_cell + 1];
                    const double em = eval_field_2d(pw.data.data(), mesh, k, cy, edge_cell,
                                                    1.0, quad.nodes[iy]) -
                                      w(xe, yv);
                    const double ep = eval_field_2d(pw.data.data(), mesh, k, cy, cr, -1.0,
                                                    quad.nodes[iy]) -
                                      w(xe, yv);
                    return 0.5 * (ep + em) + ax * (ep - em);
                };
                const int eprev = (cx + n - 1) % n;
                const double ehat_r = eps_hat(cx), ehat_l = eps_hat(eprev);
                for (int ly = 0; ly < kp; ++ly)
                    for (int lx = 0; lx < kp; ++lx) {
                        const double py = legendre_eval(ly, quad.nodes[iy]).value;
                        G.at(ly, lx, cy, cx) += 0.5 * hy * quad.weights[iy] * sx * sy *
                                                (-ehat_r * tp[lx] + ehat_l * tm[lx]) * py;
                    }
            }
        }
    const double nrm =
        std::sqrt(kernels::active().sumsq(G.data.data(), G.data.size()));
    if (g_out) *g_out = std::move(G);
    return nrm;
}

} // namespace smdg_test
