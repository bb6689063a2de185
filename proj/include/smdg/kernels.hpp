#pragma once

#include <cstddef>
#include <vector>

namespace smdg::kernels {

// Flat array kernels used by the DG operators, the time steppers and the
// norm/error reductions. Every entry has a scalar reference implementation;
// SIMD variants (AVX2+FMA on x86-64, NEON on aarch64) are selected at runtime
// and equivalence-tested against the reference.
struct Kernels {
    const char* name;

    // y[i] += a * x[i]
    void (*axpy)(double* y, const double* x, double a, std::size_t n);
    // y[i] = a * x[i]
    void (*scal)(double* y, const double* x, double a, std::size_t n);
    // y[i] += a * w[i] * x[i]   (w carries per-cell geometric factors)
    void (*wxpy)(double* y, const double* w, const double* x, double a, std::size_t n);
    // y[i] = base[i] + sum_j cs[j] * ts[j][i]   (fused m-term combination)
    void (*lincomb)(double* y, const double* base, const double* const* ts,
                    const double* cs, int m, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sumsq)(const double* x, std::size_t n);
};

// Scalar reference kernels (always available).
const Kernels& scalar();

// Kernels picked for this process: best SIMD variant the CPU supports, unless
// the SMDG_KERNELS environment variable ("scalar", "avx2", "neon") forces one.
// The choice is made once and is stable for the lifetime of the process.
const Kernels& active();

// Every variant compiled into this binary and usable on this CPU.
std::vector<const Kernels*> available();

} // namespace smdg::kernels
