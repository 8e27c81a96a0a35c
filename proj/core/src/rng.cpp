#include "qjump/rng.hpp"

#include <cmath>
#include <numbers>

namespace qjump {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
    const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(p >> 32);
    lo = static_cast<std::uint32_t>(p);
}

std::uint64_t block_u64(std::uint64_t key, std::uint64_t index) {
    // One 128-bit block yields two 64-bit words; the low bit of `index`
    // selects the word so each block is used exactly once.
    const std::uint64_t block = index >> 1;
    const auto out = philox4x32({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32), 0u, 0u},
                                {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)});
    if ((index & 1u) == 0) return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    return (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

std::uint64_t Rng::derive(std::uint64_t master_seed, std::uint64_t index) {
    const auto out = philox4x32({static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                                 0x7472616au, 0x6a656374u},
                                {static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)});
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

std::uint64_t Rng::next_u64() { return block_u64(key_, counter_++); }

double Rng::normal() {
    // 1 - u lies in (0, 1], keeping the logarithm finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace qjump
