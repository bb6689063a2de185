#include "smdg/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace smdg::kernels {

const Kernels* avx2_kernels(); // null when not compiled in or unusable
const Kernels* neon_kernels();

namespace {

bool cpu_has_avx2_fma() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

std::vector<const Kernels*> probe() {
    std::vector<const Kernels*> v;
    v.push_back(&scalar());
    if (const Kernels* k = avx2_kernels(); k && cpu_has_avx2_fma()) v.push_back(k);
    if (const Kernels* k = neon_kernels()) v.push_back(k);
    return v;
}

const Kernels& pick() {
    const char* force = std::getenv("SMDG_KERNELS");
    auto opts = probe();
    if (force && *force) {
        for (const Kernels* k : opts)
            if (std::strcmp(k->name, force) == 0) return *k;
        // Unknown or unsupported name: fall back to the reference kernels
        // rather than crash mid-run.
        return scalar();
    }
    return *opts.back(); // probe() orders from reference to best SIMD
}

} // namespace

const Kernels& active() {
    static const Kernels& k = pick();
    return k;
}

std::vector<const Kernels*> available() { return probe(); }

} // namespace smdg::kernels
