#pragma once

#include <array>
#include <cstdint>

namespace smdg {

// Philox4x32-10 counter-based generator (Salmon et al.). Gives random access
// by counter, which is what lets refinement levels share one Brownian path
// and lets parallel samples draw without shared state.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Documented stream-splitting rule: one 64-bit key per (root seed, stream id).
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t derive_stream_key(std::uint64_t root_seed, std::uint64_t stream_id);

// Standard normal draws addressable by index: gaussian(i) is a pure function
// of (key, i). Box-Muller on Philox blocks, two draws per block.
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t key) : key_(key) {}
    double gaussian(std::uint64_t index) const;
    // uniform in [0,1), independent of the gaussian sequence (separate lane)
    double uniform(std::uint64_t index) const;
    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

// Sequential cursor over a GaussianStream.
class GaussianSeq {
public:
    explicit GaussianSeq(GaussianStream s, std::uint64_t start = 0)
        : stream_(s), cursor_(start) {}
    double next() { return stream_.gaussian(cursor_++); }
    std::uint64_t cursor() const { return cursor_; }
    const GaussianStream& stream() const { return stream_; }

private:
    GaussianStream stream_;
    std::uint64_t cursor_;
};

} // namespace smdg
