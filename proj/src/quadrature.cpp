#include "smdg/quadrature.hpp"

#include <cmath>

#include "smdg/errors.hpp"

namespace smdg {

namespace {

// P_m(x) and P_m'(x) by the standard recurrences.
void legendre_pair(int m, double x, double& p, double& dp) {
    double p0 = 1.0, p1 = x;
    if (m == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = m * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace

Quadrature gauss_quadrature(int m) {
    if (m < 1) throw config_error("gauss_quadrature: need at least one point");
    Quadrature q;
    q.nodes.resize(m);
    q.weights.resize(m);
    if (m == 1) {
        q.nodes[0] = 0.0;
        q.weights[0] = 2.0;
        return q;
    }
    const double pi = std::acos(-1.0);
    // Newton iteration from the Chebyshev-like initial guess; roots come out
    // in decreasing order, fill symmetrically.
    for (int i = 0; i < (m + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (m + 0.5));
        double p, dp;
        for (int it = 0; it < 100; ++it) {
            legendre_pair(m, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        legendre_pair(m, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        q.nodes[i] = -x;
        q.weights[i] = w;
        q.nodes[m - 1 - i] = x;
        q.weights[m - 1 - i] = w;
    }
    if (m % 2 == 1) { // center the middle node exactly
        q.nodes[m / 2] = 0.0;
    }
    return q;
}

} // namespace smdg
