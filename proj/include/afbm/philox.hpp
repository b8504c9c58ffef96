#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace afbm::rng {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al. counter-based generator).
inline Counter philox4x32(Counter ctr, Key key) {
    constexpr std::uint32_t m0 = 0xD2511F53u, m1 = 0xCD9E8D57u;
    constexpr std::uint32_t w0 = 0x9E3779B9u, w1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = std::uint64_t(m0) * ctr[0];
        const std::uint64_t p1 = std::uint64_t(m1) * ctr[2];
        ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1),
               std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1], std::uint32_t(p0)};
        key[0] += w0;
        key[1] += w1;
    }
    return ctr;
}

// Uniform in the open interval (0, 1) from 53 random bits.
inline double open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t(hi) << 21) ^ (lo >> 11);
    return (double(bits) + 0.5) * 0x1.0p-53;
}

// Two independent standard normals for (seed, stream, index). Values depend only
// on these three integers, never on call order.
inline std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t stream,
                                             std::uint64_t index) {
    const Counter c = philox4x32({std::uint32_t(index), std::uint32_t(index >> 32),
                                  std::uint32_t(stream), std::uint32_t(stream >> 32)},
                                 {std::uint32_t(seed), std::uint32_t(seed >> 32)});
    const double u1 = open_unit(c[0], c[1]);
    const double u2 = open_unit(c[2], c[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double th = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(th), r * std::sin(th)};
}

// Stream identifiers: replicate index in the low bits, component and purpose above.
inline std::uint64_t stream_id(std::uint64_t replicate, unsigned component, unsigned purpose = 0) {
    return (std::uint64_t(purpose) << 56) | (std::uint64_t(component) << 48) |
           (replicate & 0xFFFFFFFFFFFFull);
}

}  // namespace afbm::rng
