#pragma once

#include <array>
#include <cstdint>

namespace qjump {

/// Philox4x32-10 block function: 128-bit counter, 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Counter-based stream. Draw i of a stream with key K is a pure function of
/// (K, i), so trajectories can be scheduled on any thread in any order.
class Rng {
public:
    explicit Rng(std::uint64_t key) : key_(key) {}

    /// Key of the m-th child stream of a master seed.
    static std::uint64_t derive(std::uint64_t master_seed, std::uint64_t index);

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal (Box-Muller, cosine branch only: two uniforms per draw).
    double normal();

    std::uint64_t key() const { return key_; }
    std::uint64_t draws() const { return counter_; }

    /// Jump to an absolute draw position.
    void seek(std::uint64_t draw_index) { counter_ = draw_index; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace qjump
