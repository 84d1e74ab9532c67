// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Philox4x32-10 counter-based generator. Every path owns a stream addressed
// by (seed, tag, sample, px, py), so results never depend on scheduling.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace heatmat {

using Philox4x32Counter = std::array<std::uint32_t, 4>;
using Philox4x32Key = std::array<std::uint32_t, 2>;

inline Philox4x32Counter philox4x32_10(Philox4x32Counter ctr, Philox4x32Key key)
{
    constexpr std::uint32_t kM0 = 0xD2511F53u;
    constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    constexpr std::uint32_t kW0 = 0x9E3779B9u;
    constexpr std::uint32_t kW1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
        const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
        ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
        key[0] += kW0;
        key[1] += kW1;
    }
    return ctr;
}

class PathRng {
public:
    PathRng(std::uint64_t seed, std::uint32_t tag, std::uint32_t sample, std::uint32_t px,
            std::uint32_t py)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32) ^ tag},
          ctr_{0, sample, px, py}
    {
    }

    std::uint32_t next_u32()
    {
        if (used_ == 4) {
            buf_ = philox4x32_10(ctr_, key_);
            ++ctr_[0];
            used_ = 0;
        }
        return buf_[used_++];
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform()
    {
        const std::uint64_t hi = next_u32() >> 5;
        const std::uint64_t lo = next_u32() >> 6;
        return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
    }

    /// Exponential variate with the given mean.
    double exponential(double mean) { return -mean * std::log1p(-uniform()); }

private:
    Philox4x32Key key_;
    Philox4x32Counter ctr_;
    Philox4x32Counter buf_{};
    int used_ = 4;
};

}  // namespace heatmat
