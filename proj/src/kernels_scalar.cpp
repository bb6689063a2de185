#include "smdg/kernels.hpp"

// Reference kernels. Plain loops, no intrinsics; these define the semantics
// the SIMD variants are tested against.

namespace smdg::kernels {
namespace {

void axpy(double* y, const double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scal(double* y, const double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = a * x[i];
}

void wxpy(double* y, const double* w, const double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * w[i] * x[i];
}

void lincomb(double* y, const double* base, const double* const* ts,
             const double* cs, int m, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double acc = base[i];
        for (int j = 0; j < m; ++j) acc += cs[j] * ts[j][i];
        y[i] = acc;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sumsq(const double* x, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
    return s;
}

} // namespace

const Kernels& scalar() {
    static const Kernels k = {"scalar", axpy, scal, wxpy, lincomb, dot, sumsq};
    return k;
}

} // namespace smdg::kernels
