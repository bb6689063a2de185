// NEON kernel variants for aarch64. Compiled only where __ARM_NEON is
// defined; on those targets NEON is baseline, so no runtime probe is needed.

#include "smdg/kernels.hpp"

#if defined(__ARM_NEON) || defined(__ARM_NEON__)
#include <arm_neon.h>

namespace smdg::kernels {
namespace {

void axpy(double* y, const double* x, double a, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double* y, const double* x, double a, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        vst1q_f64(y + i, vmulq_f64(va, vld1q_f64(x + i)));
    for (; i < n; ++i) y[i] = a * x[i];
}

void wxpy(double* y, const double* w, const double* x, double a, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t wx = vmulq_f64(vld1q_f64(w + i), vld1q_f64(x + i));
        vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, wx));
    }
    for (; i < n; ++i) y[i] += a * w[i] * x[i];
}

void lincomb(double* y, const double* base, const double* const* ts,
             const double* cs, int m, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t acc = vld1q_f64(base + i);
        for (int j = 0; j < m; ++j)
            acc = vfmaq_f64(acc, vdupq_n_f64(cs[j]), vld1q_f64(ts[j] + i));
        vst1q_f64(y + i, acc);
    }
    for (; i < n; ++i) {
        double acc = base[i];
        for (int j = 0; j < m; ++j) acc += cs[j] * ts[j][i];
        y[i] = acc;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2)
        acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sumsq(const double* x, std::size_t n) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t v = vld1q_f64(x + i);
        acc = vfmaq_f64(acc, v, v);
    }
    double s = vaddvq_f64(acc);
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

} // namespace

const Kernels* neon_kernels() {
    static const Kernels k = {"neon", axpy, scal, wxpy, lincomb, dot, sumsq};
    return &k;
}

} // namespace smdg::kernels

#else

namespace smdg::kernels {
const Kernels* neon_kernels() { return nullptr; }
} // namespace smdg::kernels

#endif
