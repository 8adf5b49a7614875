#pragma once

// Counter-based random streams. Every variate is a pure function of
// (base_seed, stream_index, position), so streams can be split across
// workers without coordination.

#include <array>
#include <cmath>
#include <cstdint>

namespace siltlab {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3", SC 2011).
constexpr Philox4x32Counter philox4x32(Philox4x32Counter ctr, Philox4x32Key key) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        if (round > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
        const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
        const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
        const auto lo0 = static_cast<std::uint32_t>(p0);
        const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
        const auto lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
}

// A reproducible stream identified by (base_seed, stream_index). The key is
// the seed, the counter is (block, stream_index); output is identical on any
// platform.
class RngStream {
  public:
    RngStream(std::uint64_t base_seed, std::uint64_t stream_index)
        : seed_(base_seed), stream_(stream_index) {}

    std::uint64_t base_seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    std::uint32_t next_u32() {
        if (used_ == 4) {
            refill();
        }
        return buffer_[used_++];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1], safe for logarithms.
    double uniform_pos() { return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; }

    double exponential() { return -std::log(uniform_pos()); }

    // Unbiased integer in [0, bound) via Lemire's multiply-and-reject.
    std::uint32_t below(std::uint32_t bound) {
        std::uint64_t m = std::uint64_t{next_u32()} * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t threshold = (0u - bound) % bound;
            while (low < threshold) {
                m = std::uint64_t{next_u32()} * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

  private:
    void refill() {
        const Philox4x32Counter ctr{static_cast<std::uint32_t>(block_),
                                    static_cast<std::uint32_t>(block_ >> 32),
                                    static_cast<std::uint32_t>(stream_),
                                    static_cast<std::uint32_t>(stream_ >> 32)};
        const Philox4x32Key key{static_cast<std::uint32_t>(seed_),
                                static_cast<std::uint32_t>(seed_ >> 32)};
        buffer_ = philox4x32(ctr, key);
        ++block_;
        used_ = 0;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t block_ = 0;
    Philox4x32Counter buffer_{};
    int used_ = 4;
};

}  // namespace siltlab
