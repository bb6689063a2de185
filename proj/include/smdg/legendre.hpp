#pragma once

#include <vector>

namespace smdg {

struct LegendreValue {
    double value;
    double derivative; // d/dxi on the reference cell
};

// L2-orthonormal Legendre polynomial of degree l on [-1,1]:
//   phi_l(xi) = sqrt((2l+1)/2) * P_l(xi),  so  int phi_l phi_m dxi = delta_lm.
// xi outside [-1,1] is rejected (throws config_error); evaluation off the
// reference cell is always an indexing bug upstream.
LegendreValue legendre_eval(int l, double xi);

// phi_l(+1) and phi_l(-1) for l = 0..k.
std::vector<double> legendre_traces_right(int k);
std::vector<double> legendre_traces_left(int k);

// Stiffness-like table D[m][l] = int_{-1}^{1} phi_l(xi) phi_m'(xi) dxi,
// row-major (k+1)x(k+1). Exactly sqrt((2l+1)(2m+1)) when m > l and m+l odd,
// zero otherwise.
std::vector<double> legendre_deriv_table(int k);

} // namespace smdg
