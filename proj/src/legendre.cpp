#include "smdg/legendre.hpp"

#include <cmath>

#include "smdg/errors.hpp"

namespace smdg {

LegendreValue legendre_eval(int l, double xi) {
    if (l < 0) throw config_error("legendre_eval: negative mode index");
    if (xi < -1.0 || xi > 1.0)
        throw config_error("legendre_eval: xi outside the reference cell [-1,1]");

    // Three-term recurrence for P_l plus the derivative recurrence
    //   P'_l = P'_{l-2} + (2l-1) P_{l-1},
    // which stays finite at xi = +-1.
    double p_prev = 1.0, p = xi;          // P_0, P_1
    double dp_prev = 0.0, dp = 1.0;       // P'_0, P'_1
    if (l == 0) return {std::sqrt(0.5), 0.0};
    for (int m = 2; m <= l; ++m) {
        const double p_next = ((2.0 * m - 1.0) * xi * p - (m - 1.0) * p_prev) / m;
        const double dp_next = dp_prev + (2.0 * m - 1.0) * p;
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    const double c = std::sqrt((2.0 * l + 1.0) / 2.0);
    return {c * p, c * dp};
}

std::vector<double> legendre_traces_right(int k) {
    std::vector<double> t(k + 1);
    for (int l = 0; l <= k; ++l) t[l] = std::sqrt((2.0 * l + 1.0) / 2.0); // P_l(1)=1
    return t;
}

std::vector<double> legendre_traces_left(int k) {
    std::vector<double> t(k + 1);
    for (int l = 0; l <= k; ++l) {
        const double c = std::sqrt((2.0 * l + 1.0) / 2.0);
        t[l] = (l % 2 == 0) ? c : -c; // P_l(-1) = (-1)^l
    }
    return t;
}

std::vector<double> legendre_deriv_table(int k) {
    std::vector<double> d((k + 1) * (k + 1), 0.0);
    for (int m = 1; m <= k; ++m)
        for (int l = 0; l < m; ++l)
            if ((m + l) % 2 == 1)
                d[m * (k + 1) + l] = std::sqrt((2.0 * l + 1.0) * (2.0 * m + 1.0));
    return d;
}

} // namespace smdg
