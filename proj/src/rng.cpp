#include "smdg/rng.hpp"

#include <cmath>

namespace smdg {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

} // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
        mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream_key(std::uint64_t root_seed, std::uint64_t stream_id) {
    return splitmix64(root_seed ^ splitmix64(stream_id + 1));
}

namespace {

// one Philox block -> two uniforms; lane selects the gaussian/uniform domain
std::array<double, 2> block_uniforms(std::uint64_t key, std::uint64_t block,
                                     std::uint32_t lane) {
    const std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), lane, 0u};
    const std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key),
                                            static_cast<std::uint32_t>(key >> 32)};
    const auto out = philox4x32(ctr, k);
    const std::uint64_t w0 = (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
    const std::uint64_t w1 = (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
    return {(w0 >> 11) * 0x1.0p-53, (w1 >> 11) * 0x1.0p-53};
}

} // namespace

double GaussianStream::gaussian(std::uint64_t index) const {
    const auto u = block_uniforms(key_, index >> 1, 0u);
    const double u1 = u[0] + 0x1.0p-54; // keep log() away from zero
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::acos(-1.0) * u[1];
    return (index & 1) ? r * std::sin(theta) : r * std::cos(theta);
}

double GaussianStream::uniform(std::uint64_t index) const {
    return block_uniforms(key_, index, 1u)[0];
}

} // namespace smdg
