// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64 only; callers must check CPU support before use
// (kernels::active() does).

#include "smdg/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>

namespace smdg::kernels {
namespace {

void axpy(double* y, const double* x, double a, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d y0 = _mm256_loadu_pd(y + i);
        __m256d y1 = _mm256_loadu_pd(y + i + 4);
        y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), y0);
        y1 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i + 4), y1);
        _mm256_storeu_pd(y + i, y0);
        _mm256_storeu_pd(y + i + 4, y1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d y0 = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
        _mm256_storeu_pd(y + i, y0);
    }
    for (; i < n; ++i) y[i] += a * x[i];
}

void scal(double* y, const double* x, double a, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
    for (; i < n; ++i) y[i] = a * x[i];
}

void wxpy(double* y, const double* w, const double* x, double a, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d wx = _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, wx, _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += a * w[i] * x[i];
}

void lincomb(double* y, const double* base, const double* const* ts,
             const double* cs, int m, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d acc = _mm256_loadu_pd(base + i);
        for (int j = 0; j < m; ++j)
            acc = _mm256_fmadd_pd(_mm256_set1_pd(cs[j]), _mm256_loadu_pd(ts[j] + i), acc);
        _mm256_storeu_pd(y + i, acc);
    }
    for (; i < n; ++i) {
        double acc = base[i];
        for (int j = 0; j < m; ++j) acc += cs[j] * ts[j][i];
        y[i] = acc;
    }
}

double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double sumsq(const double* x, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d v0 = _mm256_loadu_pd(x + i);
        __m256d v1 = _mm256_loadu_pd(x + i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    for (; i + 4 <= n; i += 4) {
        __m256d v0 = _mm256_loadu_pd(x + i);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += x[i] * x[i];
    return s;
}

} // namespace

const Kernels* avx2_kernels() {
    static const Kernels k = {"avx2", axpy, scal, wxpy, lincomb, dot, sumsq};
    return &k;
}

} // namespace smdg::kernels

#else

namespace smdg::kernels {
const Kernels* avx2_kernels() { return nullptr; }
} // namespace smdg::kernels

#endif
