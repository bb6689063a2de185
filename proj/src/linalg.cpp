#include "smdg/linalg.hpp"

#include <cmath>

#include "smdg/errors.hpp"
#include "smdg/kernels.hpp"

namespace smdg {

void lu_solve(std::vector<double> a, int n, std::vector<double>& x) {
    std::vector<int> piv(n);
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw well_posedness_error("lu_solve: zero matrix");
    const double tol = scale * 1e-13 * n;

    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::abs(a[col * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(a[r * n + col]);
            if (v > best) {
                best = v;
                p = r;
            }
        }
        if (best <= tol)
            throw well_posedness_error("lu_solve: singular system (pivot below tolerance)");
        piv[col] = p;
        if (p != col)
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[p * n + c]);
        const double inv = 1.0 / a[col * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double m = a[r * n + col] * inv;
            a[r * n + col] = m;
            if (m != 0.0)
                for (int c = col + 1; c < n; ++c) a[r * n + c] -= m * a[col * n + c];
        }
    }
    // apply the row interchanges first (multipliers are stored in their
    // final, fully pivoted positions), then forward substitution
    for (int col = 0; col < n; ++col) std::swap(x[col], x[piv[col]]);
    for (int col = 0; col < n; ++col)
        for (int r = col + 1; r < n; ++r) x[r] -= a[r * n + col] * x[col];
    // back substitution
    for (int r = n - 1; r >= 0; --r) {
        for (int c = r + 1; c < n; ++c) x[r] -= a[r * n + c] * x[c];
        x[r] /= a[r * n + r];
    }
}

std::vector<double> LinOp::to_dense() const {
    const int n = dim();
    std::vector<double> m(n * n), e(n, 0.0), col(n);
    for (int j = 0; j < n; ++j) {
        e[j] = 1.0;
        apply(e.data(), col.data());
        e[j] = 0.0;
        for (int i = 0; i < n; ++i) m[i * n + j] = col[i];
    }
    return m;
}

void DenseOp::apply(const double* x, double* y) const {
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += a[i * n + j] * x[j];
        y[i] = acc;
    }
}

void BlockCouplingOp::apply(const double* x, double* y) const {
    const auto& K = kernels::active();
    for (int i = 0; i < fields; ++i) {
        double* yi = y + static_cast<size_t>(i) * block;
        std::fill(yi, yi + block, 0.0);
        for (int j = 0; j < fields; ++j) {
            const double cij = c[i * fields + j];
            if (cij != 0.0) K.axpy(yi, x + static_cast<size_t>(j) * block, cij, block);
        }
    }
}

std::optional<double> BlockCouplingOp::isometry_rate() const {
    // C^T C == lambda^2 I ?
    double lambda2 = 0.0;
    for (int i = 0; i < fields; ++i) lambda2 += c[i * fields] * c[i * fields];
    for (int a1 = 0; a1 < fields; ++a1)
        for (int b1 = 0; b1 < fields; ++b1) {
            double dotc = 0.0;
            for (int i = 0; i < fields; ++i) dotc += c[i * fields + a1] * c[i * fields + b1];
            const double expect = (a1 == b1) ? lambda2 : 0.0;
            if (std::abs(dotc - expect) > 1e-12 * (1.0 + lambda2)) return std::nullopt;
        }
    return lambda2;
}

} // namespace smdg
