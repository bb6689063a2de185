#include "smdg/field.hpp"

#include <cmath>

#include "smdg/errors.hpp"
#include "smdg/legendre.hpp"

namespace smdg {

std::vector<double> basis_at_nodes(int k, const Quadrature& q) {
    std::vector<double> p(q.points() * (k + 1));
    for (int i = 0; i < q.points(); ++i)
        for (int l = 0; l <= k; ++l)
            p[i * (k + 1) + l] = legendre_eval(l, q.nodes[i]).value;
    return p;
}

double eval_field_1d(const double* coef, const Mesh1D& mesh, int k, int cell, double xi) {
    if (cell < 0 || cell >= mesh.n_cells)
        throw structural_error("eval_field_1d: cell index out of range");
    const double s = std::sqrt(2.0 / mesh.width(cell));
    double v = 0.0;
    for (int l = 0; l <= k; ++l)
        v += coef[l * mesh.n_cells + cell] * legendre_eval(l, xi).value;
    return s * v;
}

double eval_field_2d(const double* coef, const TensorMesh2D& mesh, int k,
                     int cy, int cx, double xi_x, double xi_y) {
    const int nx = mesh.x.n_cells, ny = mesh.y.n_cells;
    if (cx < 0 || cx >= nx || cy < 0 || cy >= ny)
        throw structural_error("eval_field_2d: cell index out of range");
    const double s = std::sqrt(2.0 / mesh.x.width(cx)) * std::sqrt(2.0 / mesh.y.width(cy));
    double v = 0.0;
    for (int ly = 0; ly <= k; ++ly) {
        const double py = legendre_eval(ly, xi_y).value;
        for (int lx = 0; lx <= k; ++lx) {
            const double c = coef[((ly * (k + 1) + lx) * ny + cy) * nx + cx];
            v += c * legendre_eval(lx, xi_x).value * py;
        }
    }
    return s * v;
}

FieldCoeffs1D l2_project_1d(const std::function<double(double)>& fn,
                            const Mesh1D& mesh, int k, int npts) {
    if (npts < 1) npts = k + 2;
    const Quadrature q = gauss_quadrature(npts);
    const auto phi = basis_at_nodes(k, q);
    FieldCoeffs1D out(mesh.n_cells, k);
    std::vector<double> fvals(npts);
    for (int j = 0; j < mesh.n_cells; ++j) {
        const double h = mesh.width(j);
        for (int i = 0; i < npts; ++i) fvals[i] = fn(mesh.to_physical(j, q.nodes[i]));
        // c_j^l = int fn phi_j^l dx = sqrt(h/2) * sum_i w_i fn(x_i) phi_l(xi_i)
        const double scale = std::sqrt(0.5 * h);
        for (int l = 0; l <= k; ++l) {
            double acc = 0.0;
            for (int i = 0; i < npts; ++i) acc += q.weights[i] * fvals[i] * phi[i * (k + 1) + l];
            out.at(l, j) = scale * acc;
        }
    }
    return out;
}

FieldCoeffs2D l2_project_2d(const std::function<double(double, double)>& fn,
                            const TensorMesh2D& mesh, int k, int npts) {
    if (npts < 1) npts = k + 2;
    const Quadrature q = gauss_quadrature(npts);
    const auto phi = basis_at_nodes(k, q);
    const int nx = mesh.x.n_cells, ny = mesh.y.n_cells;
    FieldCoeffs2D out(nx, ny, k);
    std::vector<double> fvals(npts * npts);
    std::vector<double> partial(npts * (k + 1)); // y-node x mode_x
    for (int cy = 0; cy < ny; ++cy) {
        const double hy = mesh.y.width(cy);
        for (int cx = 0; cx < nx; ++cx) {
            const double hx = mesh.x.width(cx);
            for (int iy = 0; iy < npts; ++iy) {
                const double yv = mesh.y.to_physical(cy, q.nodes[iy]);
                for (int ix = 0; ix < npts; ++ix)
                    fvals[iy * npts + ix] = fn(mesh.x.to_physical(cx, q.nodes[ix]), yv);
            }
            // contract x first, then y
            for (int iy = 0; iy < npts; ++iy)
                for (int lx = 0; lx <= k; ++lx) {
                    double acc = 0.0;
                    for (int ix = 0; ix < npts; ++ix)
                        acc += q.weights[ix] * fvals[iy * npts + ix] * phi[ix * (k + 1) + lx];
                    partial[iy * (k + 1) + lx] = acc;
                }
            const double scale = std::sqrt(0.5 * hx) * std::sqrt(0.5 * hy);
            for (int ly = 0; ly <= k; ++ly)
                for (int lx = 0; lx <= k; ++lx) {
                    double acc = 0.0;
                    for (int iy = 0; iy < npts; ++iy)
                        acc += q.weights[iy] * partial[iy * (k + 1) + lx] * phi[iy * (k + 1) + ly];
                    out.at(ly, lx, cy, cx) = scale * acc;
                }
        }
    }
    return out;
}

double l2_distance_1d(const double* coef, const Mesh1D& mesh, int k,
                      const std::function<double(double)>& fn, int npts) {
    if (npts < 1) npts = k + 3;
    const Quadrature q = gauss_quadrature(npts);
    const auto phi = basis_at_nodes(k, q);
    const int n = mesh.n_cells;
    double err2 = 0.0;
    for (int j = 0; j < n; ++j) {
        const double h = mesh.width(j);
        const double s = std::sqrt(2.0 / h);
        for (int i = 0; i < npts; ++i) {
            double wh = 0.0;
            for (int l = 0; l <= k; ++l) wh += coef[l * n + j] * phi[i * (k + 1) + l];
            wh *= s;
            const double d = fn(mesh.to_physical(j, q.nodes[i])) - wh;
            err2 += 0.5 * h * q.weights[i] * d * d;
        }
    }
    return std::sqrt(err2);
}

double l2_distance_2d(const double* coef, const TensorMesh2D& mesh, int k,
                      const std::function<double(double, double)>& fn, int npts) {
    if (npts < 1) npts = k + 3;
    const Quadrature q = gauss_quadrature(npts);
    const auto phi = basis_at_nodes(k, q);
    const int nx = mesh.x.n_cells, ny = mesh.y.n_cells;
    const int kp = k + 1;
    std::vector<double> tmp(kp * npts); // [ly][ix]
    double err2 = 0.0;
    for (int cy = 0; cy < ny; ++cy) {
        const double hy = mesh.y.width(cy);
        for (int cx = 0; cx < nx; ++cx) {
            const double hx = mesh.x.width(cx);
            const double s = std::sqrt(2.0 / hx) * std::sqrt(2.0 / hy);
            for (int ly = 0; ly < kp; ++ly)
                for (int ix = 0; ix < npts; ++ix) {
                    double acc = 0.0;
                    for (int lx = 0; lx < kp; ++lx)
                        acc += coef[((ly * kp + lx) * ny + cy) * nx + cx] * phi[ix * kp + lx];
                    tmp[ly * npts + ix] = acc;
                }
            for (int iy = 0; iy < npts; ++iy) {
                const double yv = mesh.y.to_physical(cy, q.nodes[iy]);
                for (int ix = 0; ix < npts; ++ix) {
                    double wh = 0.0;
                    for (int ly = 0; ly < kp; ++ly)
                        wh += tmp[ly * npts + ix] * phi[iy * kp + ly];
                    wh *= s;
                    const double d = fn(mesh.x.to_physical(cx, q.nodes[ix]), yv) - wh;
                    err2 += 0.25 * hx * hy * q.weights[ix] * q.weights[iy] * d * d;
                }
            }
        }
    }
    return std::sqrt(err2);
}

} // namespace smdg
