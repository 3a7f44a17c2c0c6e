#pragma once

#include <array>
#include <cstdint>

namespace perc {

// Philox-4x32-10 counter-based generator. Each output block is a pure
// function of (key, counter), so per-site uniforms depend only on the seed
// and the site's canonical index — never on thread scheduling.
namespace philox {

inline void round_once(std::array<std::uint32_t, 4>& ctr, std::array<std::uint32_t, 2>& key) {
    constexpr std::uint64_t kM0 = 0xD2511F53u;
    constexpr std::uint64_t kM1 = 0xCD9E8D57u;
    std::uint64_t p0 = kM0 * ctr[0];
    std::uint64_t p1 = kM1 * ctr[2];
    std::array<std::uint32_t, 4> next = {
        static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
        static_cast<std::uint32_t>(p1),
        static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
        static_cast<std::uint32_t>(p0)};
    ctr = next;
    key[0] += 0x9E3779B9u;
    key[1] += 0xBB67AE85u;
}

inline std::array<std::uint32_t, 4> block(std::uint64_t key64, std::uint64_t ctr_hi,
                                          std::uint64_t ctr_lo) {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(ctr_lo), static_cast<std::uint32_t>(ctr_lo >> 32),
        static_cast<std::uint32_t>(ctr_hi), static_cast<std::uint32_t>(ctr_hi >> 32)};
    std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(key64),
                                        static_cast<std::uint32_t>(key64 >> 32)};
    for (int r = 0; r < 10; ++r) round_once(ctr, key);
    return ctr;
}

}  // namespace philox

inline std::uint64_t rng_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    auto out = philox::block(seed, stream, index);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

// Uniform in [0,1) with 53 bits of precision.
inline double rng_uniform53(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    return static_cast<double>(rng_u64(seed, stream, index) >> 11) * 0x1.0p-53;
}

// Derives an independent 64-bit sub-seed, e.g. per sample index.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    auto out = philox::block(seed, stream ^ 0x5eedba11c0ffee42ULL, index);
    return (static_cast<std::uint64_t>(out[2]) << 32) | out[3];
}

}  // namespace perc
