#include "smdg/dg2d.hpp"

#include <cmath>
#include <random>

#include "smdg/dg1d.hpp"
#include "smdg/errors.hpp"
#include "smdg/kernels.hpp"
#include "smdg/legendre.hpp"

namespace smdg {

namespace {

void check_state(const State2D& st) {
    if (!st.mesh) throw structural_error("State2D: missing mesh");
    const auto same = [&](const FieldCoeffs2D& f) {
        return f.nx == st.mesh->x.n_cells && f.ny == st.mesh->y.n_cells && f.k == st.E.k;
    };
    if (!same(st.E) || !same(st.S) || !same(st.T))
        throw structural_error("State2D: E, S, T must share mesh and degree");
}

} // namespace

void verify_linear_structure_2d(const NoiseSpec2D& noise, unsigned seed) {
    if (!noise.coupling)
        throw config_error("verify_linear_structure_2d: noise is not declared linear");
    const auto& c = *noise.coupling;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int it = 0; it < 64; ++it) {
        const double x = d(rng), y = d(rng), t = std::abs(d(rng));
        const double E = d(rng), S = d(rng), T = d(rng);
        const double fe = c[0] * E + c[1] * S + c[2] * T;
        const double ge = c[3] * E + c[4] * S + c[5] * T;
        const double re = c[6] * E + c[7] * S + c[8] * T;
        const double tol = 1e-12 * (1.0 + std::abs(E) + std::abs(S) + std::abs(T));
        if (std::abs(noise.f(x, y, t, E, S, T) - fe) > tol ||
            std::abs(noise.g(x, y, t, E, S, T) - ge) > tol ||
            std::abs(noise.r(x, y, t, E, S, T) - re) > tol)
            throw config_error("2d noise declared linear-in-state but samples disagree "
                               "with the coupling matrix");
    }
}

// ---------------------------------------------------------------------------
// Reference assembly
// ---------------------------------------------------------------------------

namespace {

// out += sign * Lx(p; a): the x-direction operator applied per (ly, cy) line,
// written with plain loops.
void ref_x_sweep(const FieldCoeffs2D& p, const TensorMesh2D& mesh, double a,
                 double sign, FieldCoeffs2D& out) {
    const int nx = p.nx, ny = p.ny, k = p.k, kp = k + 1;
    const auto dtab = legendre_deriv_table(k);
    const auto tp = legendre_traces_right(k);
    const auto tm = legendre_traces_left(k);
    std::vector<double> pr(nx), pl(nx), hat(nx);
    for (int ly = 0; ly < kp; ++ly)
        for (int cy = 0; cy < ny; ++cy) {
            for (int cx = 0; cx < nx; ++cx) {
                const double s = std::sqrt(2.0 / mesh.x.width(cx));
                double r = 0, l = 0;
                for (int lx = 0; lx < kp; ++lx) {
                    r += tp[lx] * p.at(ly, lx, cy, cx);
                    l += tm[lx] * p.at(ly, lx, cy, cx);
                }
                pr[cx] = s * r;
                pl[cx] = s * l;
            }
            for (int e = 0; e < nx; ++e)
                hat[e] = (0.5 + a) * pl[(e + 1) % nx] + (0.5 - a) * pr[e];
            for (int cx = 0; cx < nx; ++cx) {
                const double hx = mesh.x.width(cx);
                const double s = std::sqrt(2.0 / hx);
                const int eprev = (cx + nx - 1) % nx;
                for (int mx = 0; mx < kp; ++mx) {
                    double vol = 0.0;
                    for (int lx = 0; lx < kp; ++lx)
                        vol += dtab[mx * kp + lx] * p.at(ly, lx, cy, cx);
                    out.at(ly, mx, cy, cx) +=
                        sign * ((2.0 / hx) * vol - hat[cx] * s * tp[mx] + hat[eprev] * s * tm[mx]);
                }
            }
        }
}

void ref_y_sweep(const FieldCoeffs2D& p, const TensorMesh2D& mesh, double a,
                 double sign, FieldCoeffs2D& out) {
    const int nx = p.nx, ny = p.ny, k = p.k, kp = k + 1;
    const auto dtab = legendre_deriv_table(k);
    const auto tp = legendre_traces_right(k);
    const auto tm = legendre_traces_left(k);
    std::vector<double> pr(ny), pl(ny), hat(ny);
    for (int lx = 0; lx < kp; ++lx)
        for (int cx = 0; cx < nx; ++cx) {
            for (int cy = 0; cy < ny; ++cy) {
                const double s = std::sqrt(2.0 / mesh.y.width(cy));
                double r = 0, l = 0;
                for (int ly = 0; ly < kp; ++ly) {
                    r += tp[ly] * p.at(ly, lx, cy, cx);
                    l += tm[ly] * p.at(ly, lx, cy, cx);
                }
                pr[cy] = s * r;
                pl[cy] = s * l;
            }
            for (int e = 0; e < ny; ++e)
                hat[e] = (0.5 + a) * pl[(e + 1) % ny] + (0.5 - a) * pr[e];
            for (int cy = 0; cy < ny; ++cy) {
                const double hy = mesh.y.width(cy);
                const double s = std::sqrt(2.0 / hy);
                const int eprev = (cy + ny - 1) % ny;
                for (int my = 0; my < kp; ++my) {
                    double vol = 0.0;
                    for (int ly = 0; ly < kp; ++ly)
                        vol += dtab[my * kp + ly] * p.at(ly, lx, cy, cx);
                    out.at(my, lx, cy, cx) +=
                        sign * ((2.0 / hy) * vol - hat[cy] * s * tp[my] + hat[eprev] * s * tm[my]);
                }
            }
        }
}

} // namespace

std::tuple<FieldCoeffs2D, FieldCoeffs2D, FieldCoeffs2D>
assemble_drift_2d(const State2D& state, const FluxParams2D& flux) {
    check_state(state);
    const TensorMesh2D& mesh = *state.mesh;
    const int nx = state.E.nx, ny = state.E.ny, k = state.E.k;
    FieldCoeffs2D dE(nx, ny, k), dS(nx, ny, k), dT(nx, ny, k);
    // dE = -A_x(T; a1) + A_y(S; -a2), dS = +A_y(E; a2), dT = -A_x(E; -a1)
    ref_x_sweep(state.T, mesh, flux.alpha1, -1.0, dE);
    ref_y_sweep(state.S, mesh, -flux.alpha2, 1.0, dE);
    ref_y_sweep(state.E, mesh, flux.alpha2, 1.0, dS);
    ref_x_sweep(state.E, mesh, -flux.alpha1, -1.0, dT);
    return {std::move(dE), std::move(dS), std::move(dT)};
}

// ---------------------------------------------------------------------------
// Kernel operator
// ---------------------------------------------------------------------------

DriftOp2D::DriftOp2D(const TensorMesh2D& mesh, int degree, const FluxParams2D& flux)
    : nx_(mesh.x.n_cells), ny_(mesh.y.n_cells), k_(degree),
      nc_(mesh.x.n_cells * mesh.y.n_cells),
      block_((degree + 1) * (degree + 1) * mesh.x.n_cells * mesh.y.n_cells),
      flux_(flux) {
    dtab_ = legendre_deriv_table(k_);
    tp_ = legendre_traces_right(k_);
    tm_ = legendre_traces_left(k_);
    sx_rep_.resize(nc_);
    sy_rep_.resize(nc_);
    ihx_rep_.resize(nc_);
    ihy_rep_.resize(nc_);
    for (int cy = 0; cy < ny_; ++cy)
        for (int cx = 0; cx < nx_; ++cx) {
            sx_rep_[cy * nx_ + cx] = std::sqrt(2.0 / mesh.x.width(cx));
            sy_rep_[cy * nx_ + cx] = std::sqrt(2.0 / mesh.y.width(cy));
            ihx_rep_[cy * nx_ + cx] = 2.0 / mesh.x.width(cx);
            ihy_rep_[cy * nx_ + cx] = 2.0 / mesh.y.width(cy);
        }
}

void DriftOp2D::x_sweep(const double* p, double a, double sign, double* out, double* ws) const {
    const auto& K = kernels::active();
    const int kp = k_ + 1, nc = nc_, nx = nx_, ny = ny_;
    double* pr = ws;
    double* pl = pr + nc;
    double* hat = pl + nc;
    for (int ly = 0; ly < kp; ++ly) {
        std::fill(pr, pr + 3 * nc, 0.0);
        for (int lx = 0; lx < kp; ++lx) {
            const double* plane = p + (ly * kp + lx) * nc;
            K.wxpy(pr, sx_rep_.data(), plane, tp_[lx], nc);
            K.wxpy(pl, sx_rep_.data(), plane, tm_[lx], nc);
        }
        for (int cy = 0; cy < ny; ++cy) {
            double* hrow = hat + cy * nx;
            const double* plrow = pl + cy * nx;
            K.axpy(hrow, plrow + 1, 0.5 + a, nx - 1);
            hrow[nx - 1] += (0.5 + a) * plrow[0];
            K.axpy(hrow, pr + cy * nx, 0.5 - a, nx);
        }
        for (int mx = 0; mx < kp; ++mx) {
            double* orow = out + (ly * kp + mx) * nc;
            for (int lx = 0; lx < kp; ++lx) {
                const double d = dtab_[mx * kp + lx];
                if (d != 0.0)
                    K.wxpy(orow, ihx_rep_.data(), p + (ly * kp + lx) * nc, sign * d, nc);
            }
            K.wxpy(orow, sx_rep_.data(), hat, -sign * tp_[mx], nc);
            for (int cy = 0; cy < ny; ++cy) {
                const int o = cy * nx;
                K.wxpy(orow + o + 1, sx_rep_.data() + o + 1, hat + o, sign * tm_[mx], nx - 1);
                orow[o] += sign * tm_[mx] * sx_rep_[o] * hat[o + nx - 1];
            }
        }
    }
}

void DriftOp2D::y_sweep(const double* p, double a, double sign, double* out, double* ws) const {
    const auto& K = kernels::active();
    const int kp = k_ + 1, nc = nc_, nx = nx_;
    double* pr = ws;
    double* pl = pr + nc;
    double* hat = pl + nc;
    for (int lx = 0; lx < kp; ++lx) {
        std::fill(pr, pr + 3 * nc, 0.0);
        for (int ly = 0; ly < kp; ++ly) {
            const double* plane = p + (ly * kp + lx) * nc;
            K.wxpy(pr, sy_rep_.data(), plane, tp_[ly], nc);
            K.wxpy(pl, sy_rep_.data(), plane, tm_[ly], nc);
        }
        K.axpy(hat, pl + nx, 0.5 + a, nc - nx);
        K.axpy(hat + nc - nx, pl, 0.5 + a, nx);
        K.axpy(hat, pr, 0.5 - a, nc);
        for (int my = 0; my < kp; ++my) {
            double* orow = out + (my * kp + lx) * nc;
            for (int ly = 0; ly < kp; ++ly) {
                const double d = dtab_[my * kp + ly];
                if (d != 0.0)
                    K.wxpy(orow, ihy_rep_.data(), p + (ly * kp + lx) * nc, sign * d, nc);
            }
            K.wxpy(orow, sy_rep_.data(), hat, -sign * tp_[my], nc);
            K.wxpy(orow + nx, sy_rep_.data() + nx, hat, sign * tm_[my], nc - nx);
            K.wxpy(orow, sy_rep_.data(), hat + nc - nx, sign * tm_[my], nx);
        }
    }
}

void DriftOp2D::apply(const double* x, double* y) const {
    const double* E = x;
    const double* S = x + block_;
    const double* T = x + 2 * block_;
    double* dE = y;
    double* dS = y + block_;
    double* dT = y + 2 * block_;
    std::fill(y, y + 3 * block_, 0.0);

    thread_local std::vector<double> ws;
    if (ws.size() < static_cast<size_t>(3 * nc_)) ws.assign(3 * nc_, 0.0);

    x_sweep(T, flux_.alpha1, -1.0, dE, ws.data());
    y_sweep(S, -flux_.alpha2, 1.0, dE, ws.data());
    y_sweep(E, flux_.alpha2, 1.0, dS, ws.data());
    x_sweep(E, -flux_.alpha1, -1.0, dT, ws.data());
}

// ---------------------------------------------------------------------------

std::tuple<FieldCoeffs2D, FieldCoeffs2D, FieldCoeffs2D>
assemble_noise_2d(const State2D& state, const NoiseSpec2D& noise) {
    check_state(state);
    const TensorMesh2D& mesh = *state.mesh;
    const int nx = state.E.nx, ny = state.E.ny, k = state.E.k, kp = k + 1;
    const int npts = k + 2;
    const Quadrature q = gauss_quadrature(npts);
    const auto phi = basis_at_nodes(k, q);

    FieldCoeffs2D pf(nx, ny, k), pg(nx, ny, k), prr(nx, ny, k);
    std::vector<double> ev(npts * npts), sv(npts * npts), tv(npts * npts);
    std::vector<double> fx(npts * npts), gx(npts * npts), rx(npts * npts);
    std::vector<double> pxf(npts * kp), pxg(npts * kp), pxr(npts * kp);

    for (int cy = 0; cy < ny; ++cy)
        for (int cx = 0; cx < nx; ++cx) {
            const double s = std::sqrt(2.0 / mesh.x.width(cx)) * std::sqrt(2.0 / mesh.y.width(cy));
            for (int iy = 0; iy < npts; ++iy)
                for (int ix = 0; ix < npts; ++ix) {
                    double e = 0, ss = 0, tt = 0;
                    for (int ly = 0; ly < kp; ++ly)
                        for (int lx = 0; lx < kp; ++lx) {
                            const double b = phi[ix * kp + lx] * phi[iy * kp + ly];
                            e += state.E.at(ly, lx, cy, cx) * b;
                            ss += state.S.at(ly, lx, cy, cx) * b;
                            tt += state.T.at(ly, lx, cy, cx) * b;
                        }
                    e *= s;
                    ss *= s;
                    tt *= s;
                    const double xv = mesh.x.to_physical(cx, q.nodes[ix]);
                    const double yv = mesh.y.to_physical(cy, q.nodes[iy]);
                    const int o = iy * npts + ix;
                    ev[o] = e;
                    sv[o] = ss;
                    tv[o] = tt;
                    fx[o] = noise.f(xv, yv, state.t, e, ss, tt);
                    gx[o] = noise.g(xv, yv, state.t, e, ss, tt);
                    rx[o] = noise.r(xv, yv, state.t, e, ss, tt);
                }
            const double scale =
                std::sqrt(0.5 * mesh.x.width(cx)) * std::sqrt(0.5 * mesh.y.width(cy));
            for (int iy = 0; iy < npts; ++iy)
                for (int lx = 0; lx < kp; ++lx) {
                    double af = 0, ag = 0, ar = 0;
                    for (int ix = 0; ix < npts; ++ix) {
                        const double wb = q.weights[ix] * phi[ix * kp + lx];
                        af += wb * fx[iy * npts + ix];
                        ag += wb * gx[iy * npts + ix];
                        ar += wb * rx[iy * npts + ix];
                    }
                    pxf[iy * kp + lx] = af;
                    pxg[iy * kp + lx] = ag;
                    pxr[iy * kp + lx] = ar;
                }
            for (int ly = 0; ly < kp; ++ly)
                for (int lx = 0; lx < kp; ++lx) {
                    double af = 0, ag = 0, ar = 0;
                    for (int iy = 0; iy < npts; ++iy) {
                        const double wb = q.weights[iy] * phi[iy * kp + ly];
                        af += wb * pxf[iy * kp + lx];
                        ag += wb * pxg[iy * kp + lx];
                        ar += wb * pxr[iy * kp + lx];
                    }
                    pf.at(ly, lx, cy, cx) = scale * af;
                    pg.at(ly, lx, cy, cx) = scale * ag;
                    prr.at(ly, lx, cy, cx) = scale * ar;
                }
        }
    return {std::move(pf), std::move(pg), std::move(prr)};
}

FieldCoeffs2D radau_projection_2d(const std::function<double(double, double)>& fn,
                                  const TensorMesh2D& mesh, int degree,
                                  std::optional<double> alpha_x,
                                  std::optional<double> alpha_y) {
    if (alpha_x && *alpha_x == 0.0)
        throw well_posedness_error("radau_projection_2d: alpha_x = 0 in a projected direction");
    if (alpha_y && *alpha_y == 0.0)
        throw well_posedness_error("radau_projection_2d: alpha_y = 0 in a projected direction");
    const int nx = mesh.x.n_cells, ny = mesh.y.n_cells, k = degree, kp = k + 1;
    const int npts = k + 2;
    const Quadrature q = gauss_quadrature(npts);
    const auto phi = basis_at_nodes(k, q);

    // Stage 1: 1D projection in y at every x abscissa the x-stage needs
    // (volume quadrature nodes, and the cell edges when x uses Radau).
    const int n_abs = nx * npts + (alpha_x ? nx : 0);
    std::vector<double> xs(n_abs);
    for (int cx = 0; cx < nx; ++cx)
        for (int i = 0; i < npts; ++i)
            xs[cx * npts + i] = mesh.x.to_physical(cx, q.nodes[i]);
    if (alpha_x)
        for (int e = 0; e < nx; ++e) xs[nx * npts + e] = mesh.x.edges[e + 1];

    std::vector<FieldCoeffs1D> ycoef(n_abs);
    for (int a = 0; a < n_abs; ++a) {
        const double xv = xs[a];
        auto line = [&](double yv) { return fn(xv, yv); };
        ycoef[a] = alpha_y ? radau_project_1d(line, mesh.y, k, *alpha_y)
                           : l2_project_1d(line, mesh.y, k);
    }

    // Stage 2: 1D projection in x per (ly, cy) line of y-modal data.
    FieldCoeffs2D out(nx, ny, k);
    std::vector<double> edge_vals(alpha_x ? nx : 0);
    for (int ly = 0; ly < kp; ++ly)
        for (int cy = 0; cy < ny; ++cy) {
            FieldCoeffs1D base(nx, k);
            for (int cx = 0; cx < nx; ++cx) {
                const double scale = std::sqrt(0.5 * mesh.x.width(cx));
                for (int lx = 0; lx < kp; ++lx) {
                    double acc = 0.0;
                    for (int i = 0; i < npts; ++i)
                        acc += q.weights[i] * ycoef[cx * npts + i].at(ly, cy) * phi[i * kp + lx];
                    base.at(lx, cx) = scale * acc;
                }
            }
            if (alpha_x) {
                for (int e = 0; e < nx; ++e) edge_vals[e] = ycoef[nx * npts + e].at(ly, cy);
                base = radau_complete_1d(std::move(base), edge_vals, mesh.x, *alpha_x);
            }
            for (int lx = 0; lx < kp; ++lx)
                for (int cx = 0; cx < nx; ++cx) out.at(ly, lx, cy, cx) = base.at(lx, cx);
        }
    return out;
}

double discrete_energy_2d(const State2D& state) {
    check_state(state);
    const auto& K = kernels::active();
    return K.sumsq(state.E.data.data(), state.E.data.size()) +
           K.sumsq(state.S.data.data(), state.S.data.size()) +
           K.sumsq(state.T.data.data(), state.T.data.size());
}

std::tuple<double, double, double>
l2_error_2d(const State2D& state,
            const std::function<double(double, double)>& exact_E,
            const std::function<double(double, double)>& exact_S,
            const std::function<double(double, double)>& exact_T) {
    check_state(state);
    const int k = state.E.k;
    return {l2_distance_2d(state.E.data.data(), *state.mesh, k, exact_E, k + 3),
            l2_distance_2d(state.S.data.data(), *state.mesh, k, exact_S, k + 3),
            l2_distance_2d(state.T.data.data(), *state.mesh, k, exact_T, k + 3)};
}

} // namespace smdg
