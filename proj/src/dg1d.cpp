#include "smdg/dg1d.hpp"

#include <cmath>
#include <random>

#include "smdg/errors.hpp"
#include "smdg/kernels.hpp"
#include "smdg/legendre.hpp"

namespace smdg {

namespace {

void check_state(const State1D& st) {
    if (!st.mesh) throw structural_error("State1D: missing mesh");
    if (st.u.n != st.v.n || st.u.k != st.v.k)
        throw structural_error("State1D: u and v must share mesh and degree");
    if (st.u.n != st.mesh->n_cells)
        throw structural_error("State1D: coefficient array does not match mesh");
}

// y[j] += a * src[(j+1) mod n], periodic shift by one cell.
void add_next(const kernels::Kernels& K, double* y, const double* src, double a, int n) {
    K.axpy(y, src + 1, a, n - 1);
    y[n - 1] += a * src[0];
}

} // namespace

void FluxParams1D::validate() const {
    if (beta1 < 0.0 || beta2 < 0.0)
        throw config_error("flux parameters: beta1, beta2 >= 0 is required by the energy law");
}

void verify_linear_structure(const NoiseSpec1D& noise, unsigned seed) {
    if (!noise.coupling)
        throw config_error("verify_linear_structure: noise is not declared linear");
    const auto& c = *noise.coupling;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    for (int it = 0; it < 64; ++it) {
        const double x = dist(rng), t = std::abs(dist(rng));
        const double u = dist(rng), v = dist(rng);
        const double g = noise.g(x, t, u, v), f = noise.f(x, t, u, v);
        const double ge = c[0] * u + c[1] * v, fe = c[2] * u + c[3] * v;
        const double tol = 1e-12 * (1.0 + std::abs(u) + std::abs(v));
        if (std::abs(g - ge) > tol || std::abs(f - fe) > tol)
            throw config_error("noise declared linear-in-state but samples disagree "
                               "with the coupling matrix (affine offset or nonlinearity)");
    }
}

std::pair<FieldCoeffs1D, FieldCoeffs1D>
assemble_drift_1d(const State1D& state, const FluxParams1D& flux) {
    check_state(state);
    flux.validate();
    const Mesh1D& mesh = *state.mesh;
    const int n = state.u.n, k = state.u.k, kp = k + 1;
    const auto dtab = legendre_deriv_table(k);
    const auto tp = legendre_traces_right(k);
    const auto tm = legendre_traces_left(k);
    const double al = flux.alpha, b1 = flux.beta1, b2 = flux.beta2;

    // cell traces: value of each field at its own right (ur) and left (ul) edge
    std::vector<double> ur(n), ul(n), vr(n), vl(n);
    for (int j = 0; j < n; ++j) {
        const double s = std::sqrt(2.0 / mesh.width(j));
        double a = 0, b = 0, c = 0, d = 0;
        for (int l = 0; l < kp; ++l) {
            a += tp[l] * state.u.at(l, j);
            b += tm[l] * state.u.at(l, j);
            c += tp[l] * state.v.at(l, j);
            d += tm[l] * state.v.at(l, j);
        }
        ur[j] = s * a;
        ul[j] = s * b;
        vr[j] = s * c;
        vl[j] = s * d;
    }

    // fluxes at edge j+1/2 (between cells j and j+1, periodic)
    std::vector<double> uhat(n), vhat(n);
    for (int e = 0; e < n; ++e) {
        const int jn = (e + 1) % n;
        const double um = ur[e], up = ul[jn], vm = vr[e], vp = vl[jn];
        uhat[e] = 0.5 * (up + um) + al * (up - um) - b1 * (vp - vm);
        vhat[e] = 0.5 * (vp + vm) - al * (vp - vm) - b2 * (up - um);
    }

    FieldCoeffs1D du(n, k), dv(n, k);
    for (int j = 0; j < n; ++j) {
        const double h = mesh.width(j);
        const double s = std::sqrt(2.0 / h);
        const int eprev = (j + n - 1) % n;
        for (int m = 0; m < kp; ++m) {
            double volu = 0, volv = 0;
            for (int l = 0; l < kp; ++l) {
                volu += dtab[m * kp + l] * state.u.at(l, j);
                volv += dtab[m * kp + l] * state.v.at(l, j);
            }
            dv.at(m, j) = (2.0 / h) * volu - uhat[j] * s * tp[m] + uhat[eprev] * s * tm[m];
            du.at(m, j) = (2.0 / h) * volv - vhat[j] * s * tp[m] + vhat[eprev] * s * tm[m];
        }
    }
    return {std::move(du), std::move(dv)};
}

DriftOp1D::DriftOp1D(const Mesh1D& mesh, int degree, const FluxParams1D& flux)
    : n_(mesh.n_cells), k_(degree), block_((degree + 1) * mesh.n_cells), flux_(flux) {
    flux_.validate();
    inv_h2_.resize(n_);
    s_.resize(n_);
    for (int j = 0; j < n_; ++j) {
        inv_h2_[j] = 2.0 / mesh.width(j);
        s_[j] = std::sqrt(2.0 / mesh.width(j));
    }
    dtab_ = legendre_deriv_table(k_);
    tp_ = legendre_traces_right(k_);
    tm_ = legendre_traces_left(k_);
}

void DriftOp1D::directional(const double* p, const double* hat, double* out) const {
    const auto& K = kernels::active();
    const int kp = k_ + 1, n = n_;
    for (int m = 0; m < kp; ++m) {
        double* row = out + m * n;
        for (int l = 0; l < kp; ++l) {
            const double d = dtab_[m * kp + l];
            if (d != 0.0) K.wxpy(row, inv_h2_.data(), p + l * n, d, n);
        }
        // -(hat phi^-)_{j+1/2} + (hat phi^+)_{j-1/2}
        K.wxpy(row, s_.data(), hat, -tp_[m], n);
        K.wxpy(row + 1, s_.data() + 1, hat, tm_[m], n - 1);
        row[0] += tm_[m] * s_[0] * hat[n - 1];
    }
}

void DriftOp1D::apply(const double* x, double* y) const {
    const auto& K = kernels::active();
    const int n = n_, kp = k_ + 1;
    const double* u = x;
    const double* v = x + block_;
    double* du = y;
    double* dv = y + block_;

    thread_local std::vector<double> ws;
    ws.assign(6 * n, 0.0);
    double* cru = ws.data();
    double* clu = cru + n;
    double* crv = clu + n;
    double* clv = crv + n;
    double* uhat = clv + n;
    double* vhat = uhat + n;

    for (int l = 0; l < kp; ++l) {
        K.wxpy(cru, s_.data(), u + l * n, tp_[l], n);
        K.wxpy(clu, s_.data(), u + l * n, tm_[l], n);
        K.wxpy(crv, s_.data(), v + l * n, tp_[l], n);
        K.wxpy(clv, s_.data(), v + l * n, tm_[l], n);
    }
    const double al = flux_.alpha, b1 = flux_.beta1, b2 = flux_.beta2;
    add_next(K, uhat, clu, 0.5 + al, n);
    K.axpy(uhat, cru, 0.5 - al, n);
    if (b1 != 0.0) {
        add_next(K, uhat, clv, -b1, n);
        K.axpy(uhat, crv, b1, n);
    }
    add_next(K, vhat, clv, 0.5 - al, n);
    K.axpy(vhat, crv, 0.5 + al, n);
    if (b2 != 0.0) {
        add_next(K, vhat, clu, -b2, n);
        K.axpy(vhat, cru, b2, n);
    }

    std::fill(y, y + 2 * block_, 0.0);
    directional(u, uhat, dv);
    directional(v, vhat, du);
}

std::pair<FieldCoeffs1D, FieldCoeffs1D>
assemble_noise_1d(const State1D& state, const NoiseSpec1D& noise) {
    check_state(state);
    const Mesh1D& mesh = *state.mesh;
    const int n = state.u.n, k = state.u.k, kp = k + 1;
    const int npts = k + 2;
    const Quadrature q = gauss_quadrature(npts);
    const auto phi = basis_at_nodes(k, q);

    FieldCoeffs1D gu(n, k), fv(n, k);
    for (int j = 0; j < n; ++j) {
        const double h = mesh.width(j);
        const double s = std::sqrt(2.0 / h);
        const double scale = std::sqrt(0.5 * h);
        for (int l = 0; l < kp; ++l) {
            double ag = 0.0, af = 0.0;
            for (int i = 0; i < npts; ++i) {
                double uh = 0.0, vh = 0.0;
                for (int m = 0; m < kp; ++m) {
                    uh += state.u.at(m, j) * phi[i * kp + m];
                    vh += state.v.at(m, j) * phi[i * kp + m];
                }
                uh *= s;
                vh *= s;
                const double x = mesh.to_physical(j, q.nodes[i]);
                ag += q.weights[i] * noise.g(x, state.t, uh, vh) * phi[i * kp + l];
                af += q.weights[i] * noise.f(x, state.t, uh, vh) * phi[i * kp + l];
            }
            gu.at(l, j) = scale * ag;
            fv.at(l, j) = scale * af;
        }
    }
    return {std::move(gu), std::move(fv)};
}

double discrete_energy_1d(const State1D& state) {
    check_state(state);
    const auto& K = kernels::active();
    return K.sumsq(state.u.data.data(), state.u.data.size()) +
           K.sumsq(state.v.data.data(), state.v.data.size());
}

std::pair<double, double> l2_error_1d(const State1D& state,
                                      const std::function<double(double)>& exact_u,
                                      const std::function<double(double)>& exact_v) {
    check_state(state);
    const int k = state.u.k;
    return {l2_distance_1d(state.u.data.data(), *state.mesh, k, exact_u, k + 3),
            l2_distance_1d(state.v.data.data(), *state.mesh, k, exact_v, k + 3)};
}

// ---------------------------------------------------------------------------
// Global projection pair
// ---------------------------------------------------------------------------

namespace {

struct EdgeTraceTables {
    std::vector<double> s;  // sqrt(2/h_j)
    std::vector<double> tp, tm;
};

EdgeTraceTables trace_tables(const Mesh1D& mesh, int k) {
    EdgeTraceTables t;
    t.s.resize(mesh.n_cells);
    for (int j = 0; j < mesh.n_cells; ++j) t.s[j] = std::sqrt(2.0 / mesh.width(j));
    t.tp = legendre_traces_right(k);
    t.tm = legendre_traces_left(k);
    return t;
}

// Trace of the modes-below-k part at the cell's right/left edge.
double known_trace(const FieldCoeffs1D& c, const EdgeTraceTables& t, int j, bool right) {
    double acc = 0.0;
    for (int l = 0; l < c.k; ++l)
        acc += c.at(l, j) * (right ? t.tp[l] : t.tm[l]);
    return t.s[j] * acc;
}

// Solve the cyclic bidiagonal system  cm[e] x_e + cp[e] x_{e+1} = rhs[e]
// (indices mod n). Direction of elimination follows the contracting ratio;
// the local alpha = +-1/2 cases fall out naturally (cm or cp == 0).
std::vector<double> cyclic_bidiagonal_solve(const std::vector<double>& cm,
                                            const std::vector<double>& cp,
                                            const std::vector<double>& rhs) {
    const int n = static_cast<int>(rhs.size());
    std::vector<double> x(n, 0.0);
    double max_cm = 0.0, max_cp = 0.0, sum_lm = 0.0, sum_lp = 0.0;
    for (int e = 0; e < n; ++e) {
        max_cm = std::max(max_cm, std::abs(cm[e]));
        max_cp = std::max(max_cp, std::abs(cp[e]));
    }
    const double scale = std::max(max_cm, max_cp);
    if (scale == 0.0) throw well_posedness_error("projection: zero interface system");
    if (max_cm <= 1e-14 * scale) {
        for (int e = 0; e < n; ++e) x[(e + 1) % n] = rhs[e] / cp[e];
        return x;
    }
    if (max_cp <= 1e-14 * scale) {
        for (int e = 0; e < n; ++e) x[e] = rhs[e] / cm[e];
        return x;
    }
    for (int e = 0; e < n; ++e) {
        sum_lm += std::log(std::abs(cm[e]));
        sum_lp += std::log(std::abs(cp[e]));
    }
    std::vector<double> p(n, 0.0), g(n, 0.0);
    if (sum_lm <= sum_lp) {
        // forward: x_{e+1} = (rhs_e - cm_e x_e)/cp_e, x_j = p_j + g_j x_0
        p[0] = 0.0;
        g[0] = 1.0;
        for (int e = 0; e + 1 < n; ++e) {
            p[e + 1] = (rhs[e] - cm[e] * p[e]) / cp[e];
            g[e + 1] = -cm[e] * g[e] / cp[e];
        }
        const double den = cp[n - 1] + cm[n - 1] * g[n - 1];
        if (std::abs(den) <= 1e-12 * scale)
            throw well_posedness_error("projection: singular cyclic system "
                                       "(alpha^2 + beta1*beta2 = 0 regime)");
        x[0] = (rhs[n - 1] - cm[n - 1] * p[n - 1]) / den;
    } else {
        // backward: x_e = (rhs_e - cp_e x_{e+1})/cm_e with x_n == x_0
        p[n - 1] = rhs[n - 1] / cm[n - 1];
        g[n - 1] = -cp[n - 1] / cm[n - 1];
        for (int e = n - 2; e >= 1; --e) {
            p[e] = (rhs[e] - cp[e] * p[e + 1]) / cm[e];
            g[e] = -cp[e] * g[e + 1] / cm[e];
        }
        const double den = cm[0] + cp[0] * g[1];
        if (std::abs(den) <= 1e-12 * scale)
            throw well_posedness_error("projection: singular cyclic system "
                                       "(alpha^2 + beta1*beta2 = 0 regime)");
        x[0] = (rhs[0] - cp[0] * p[1]) / den;
    }
    for (int j = 1; j < n; ++j) x[j] = p[j] + g[j] * x[0];
    return x;
}

} // namespace

std::pair<FieldCoeffs1D, FieldCoeffs1D>
global_projection_pair_1d(const std::function<double(double)>& q,
                          const std::function<double(double)>& r,
                          const Mesh1D& mesh, int degree,
                          const FluxParams1D& flux) {
    flux.validate();
    if (!flux.projection_well_posed())
        throw well_posedness_error("global projection pair requires alpha^2 + beta1*beta2 != 0");
    const int n = mesh.n_cells, k = degree;
    const auto t = trace_tables(mesh, k);
    const double al = flux.alpha, b1 = flux.beta1, b2 = flux.beta2;

    // Moment conditions against P^{k-1} pin modes 0..k-1 to the L2 coefficients.
    FieldCoeffs1D pq = l2_project_1d(q, mesh, k);
    FieldCoeffs1D pr = l2_project_1d(r, mesh, k);
    for (int j = 0; j < n; ++j) pq.at(k, j) = pr.at(k, j) = 0.0;

    // Coupled 2N interface system in the top modes a_j = (Pq)_j^k, b_j = (Pr)_j^k.
    const int dim = 2 * n;
    std::vector<double> A(dim * dim, 0.0), rhs(dim, 0.0);
    auto a_col = [&](int j) { return 2 * j; };
    auto b_col = [&](int j) { return 2 * j + 1; };
    for (int e = 0; e < n; ++e) {
        const int jn = (e + 1) % n;
        const double xe = mesh.edges[e + 1];
        const double wp = t.s[jn] * t.tm[k]; // weight of the (e+1)-cell top mode trace
        const double wm = t.s[e] * t.tp[k];  // weight of the e-cell top mode trace
        const double kqm = known_trace(pq, t, e, true), kqp = known_trace(pq, t, jn, false);
        const double krm = known_trace(pr, t, e, true), krp = known_trace(pr, t, jn, false);

        const int row1 = 2 * e; // ({Pq} + al [Pq] - b1 [Pr]) = q(xe)
        A[row1 * dim + a_col(jn)] += (0.5 + al) * wp;
        A[row1 * dim + a_col(e)] += (0.5 - al) * wm;
        A[row1 * dim + b_col(jn)] += -b1 * wp;
        A[row1 * dim + b_col(e)] += b1 * wm;
        rhs[row1] = q(xe) - ((0.5 + al) * kqp + (0.5 - al) * kqm - b1 * (krp - krm));

        const int row2 = 2 * e + 1; // ({Pr} - al [Pr] - b2 [Pq]) = r(xe)
        A[row2 * dim + b_col(jn)] += (0.5 - al) * wp;
        A[row2 * dim + b_col(e)] += (0.5 + al) * wm;
        A[row2 * dim + a_col(jn)] += -b2 * wp;
        A[row2 * dim + a_col(e)] += b2 * wm;
        rhs[row2] = r(xe) - ((0.5 - al) * krp + (0.5 + al) * krm - b2 * (kqp - kqm));
    }
    lu_solve(std::move(A), dim, rhs);
    for (int j = 0; j < n; ++j) {
        pq.at(k, j) = rhs[a_col(j)];
        pr.at(k, j) = rhs[b_col(j)];
    }
    return {std::move(pq), std::move(pr)};
}

FieldCoeffs1D radau_complete_1d(FieldCoeffs1D base,
                                const std::vector<double>& edge_values,
                                const Mesh1D& mesh, double a) {
    const int n = mesh.n_cells, k = base.k;
    const auto t = trace_tables(mesh, k);
    for (int j = 0; j < n; ++j) base.at(k, j) = 0.0;

    std::vector<double> cm(n), cp(n), rhs(n);
    for (int e = 0; e < n; ++e) {
        const int jn = (e + 1) % n;
        cm[e] = (0.5 - a) * t.s[e] * t.tp[k];
        cp[e] = (0.5 + a) * t.s[jn] * t.tm[k];
        const double kqm = known_trace(base, t, e, true), kqp = known_trace(base, t, jn, false);
        rhs[e] = edge_values[e] - ((0.5 + a) * kqp + (0.5 - a) * kqm);
    }
    const auto top = cyclic_bidiagonal_solve(cm, cp, rhs);
    for (int j = 0; j < n; ++j) base.at(k, j) = top[j];
    return base;
}

FieldCoeffs1D radau_project_1d(const std::function<double(double)>& q,
                               const Mesh1D& mesh, int degree, double a) {
    const int n = mesh.n_cells;
    std::vector<double> edge_values(n);
    for (int e = 0; e < n; ++e) edge_values[e] = q(mesh.edges[e + 1]);
    return radau_complete_1d(l2_project_1d(q, mesh, degree), edge_values, mesh, a);
}

std::pair<FieldCoeffs1D, FieldCoeffs1D>
global_projection_pair_decoupled_1d(const std::function<double(double)>& q,
                                    const std::function<double(double)>& r,
                                    const Mesh1D& mesh, int degree, double alpha) {
    // beta1 = beta2 = 0: the pair splits into P^{alpha,0} q and P^{-alpha,0} r.
    return {radau_project_1d(q, mesh, degree, alpha),
            radau_project_1d(r, mesh, degree, -alpha)};
}

double projection_interface_residual_1d(const FieldCoeffs1D& pq,
                                        const FieldCoeffs1D& pr,
                                        const std::function<double(double)>& q,
                                        const std::function<double(double)>& r,
                                        const Mesh1D& mesh,
                                        const FluxParams1D& flux) {
    const int n = mesh.n_cells, k = pq.k, kp = k + 1;
    const auto t = trace_tables(mesh, k);
    double worst = 0.0;
    for (int e = 0; e < n; ++e) {
        const int jn = (e + 1) % n;
        double qm = 0, qp = 0, rm = 0, rp = 0;
        for (int l = 0; l < kp; ++l) {
            qm += pq.at(l, e) * t.tp[l];
            qp += pq.at(l, jn) * t.tm[l];
            rm += pr.at(l, e) * t.tp[l];
            rp += pr.at(l, jn) * t.tm[l];
        }
        qm *= t.s[e];
        qp *= t.s[jn];
        rm *= t.s[e];
        rp *= t.s[jn];
        const double xe = mesh.edges[e + 1];
        const double res1 = 0.5 * (qp + qm) + flux.alpha * (qp - qm) -
                            flux.beta1 * (rp - rm) - q(xe);
        const double res2 = 0.5 * (rp + rm) - flux.alpha * (rp - rm) -
                            flux.beta2 * (qp - qm) - r(xe);
        worst = std::max(worst, std::max(std::abs(res1), std::abs(res2)));
    }
    return worst;
}

} // namespace smdg
