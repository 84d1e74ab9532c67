// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <set>

#include "heatmat/rng.hpp"

using namespace heatmat;

TEST_CASE("philox4x32-10 known answers")
{
    const auto z = philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(z[0] == 0x6627e8d5u);
    CHECK(z[1] == 0xe169c58du);
    CHECK(z[2] == 0xbc57ac4cu);
    CHECK(z[3] == 0x9b00dbd8u);
    const auto f = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu});
    CHECK(f[0] == 0x408f276du);
    CHECK(f[1] == 0x41c83b0eu);
    CHECK(f[2] == 0xa20bc7c6u);
    CHECK(f[3] == 0x6d5451fdu);
}

TEST_CASE("streams are reproducible and distinct")
{
    PathRng a(42, 1, 7, 3, 4);
    PathRng b(42, 1, 7, 3, 4);
    for (int k = 0; k < 100; ++k) {
        CHECK(a.next_u32() == b.next_u32());
    }
    std::set<std::uint32_t> firsts;
    for (std::uint32_t s = 0; s < 50; ++s) {
        PathRng r(42, 1, s, 3, 4);
        firsts.insert(r.next_u32());
    }
    CHECK(firsts.size() == 50);
    PathRng c(42, 2, 7, 3, 4);
    PathRng d(43, 1, 7, 3, 4);
    PathRng e(42, 1, 7, 3, 4);
    const auto ce = e.next_u32();
    CHECK(c.next_u32() != ce);
    CHECK(d.next_u32() != ce);
}

TEST_CASE("uniform moments and range")
{
    PathRng r(1, 0, 0, 0, 0);
    const int n = 200000;
    double s = 0.0;
    double s2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
    }
    CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));
    CHECK(s2 / n == doctest::Approx(1.0 / 3.0).epsilon(0.01));
}

TEST_CASE("exponential mean within 1% over 1e5 draws")
{
    PathRng r(9, 0, 0, 0, 0);
    const double mean = 15187.5;
    double s = 0.0;
    for (int k = 0; k < 100000; ++k) {
        s += r.exponential(mean);
    }
    CHECK(std::abs(s / 100000 - mean) / mean < 0.01);
}
