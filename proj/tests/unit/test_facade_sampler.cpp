// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <array>
#include <cmath>

#include "fixtures.hpp"
#include "heatmat/errors.hpp"
#include "heatmat/facade_sampler.hpp"
#include "heatmat/rng.hpp"

using namespace heatmat;

namespace {

const MaterialId kBrick = heatmat::test::id_of("Brick");
const MaterialId kGlass = heatmat::test::id_of("Glass");
const MaterialId kWood = heatmat::test::id_of("Wood");
const MaterialId kAlu = heatmat::test::id_of("Aluminium");

FacadeComposition mixed()
{
    FacadeComposition c;
    c[FacadeSlot::ground_main] = {kBrick, 55};
    c[FacadeSlot::ground_windows] = {kGlass, 20};
    c[FacadeSlot::ground_frames] = {kAlu, 10};
    c[FacadeSlot::ground_doors] = {kWood, 15};
    c[FacadeSlot::upper_main] = {kBrick, 50};
    c[FacadeSlot::upper_windows] = {kGlass, 25};
    c[FacadeSlot::upper_frames] = {kAlu, 10};
    c[FacadeSlot::upper_shutters] = {kWood, 15};
    return c;
}

// Area share of each component on one level, midpoint rule on an n x n tile grid.
std::array<double, 5> coverage(const FacadeLayout& layout, bool ground, int n)
{
    std::array<double, 5> acc{};
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            const auto c = layout.component_at(ground, (a + 0.5) / n, (b + 0.5) / n);
            acc[static_cast<int>(c)] += 1.0 / (static_cast<double>(n) * n);
        }
    }
    return acc;
}

double share(const std::array<double, 5>& a, FacadeComponent c)
{
    return a[static_cast<int>(c)];
}

}  // namespace

TEST_CASE("layout area shares equal the slot percentages")
{
    const FacadeLayout layout(mixed(), FacadePattern{});
    CHECK(layout.warnings().empty());
    const int n = 2000;
    const auto g = coverage(layout, true, n);
    CHECK(share(g, FacadeComponent::main) == doctest::Approx(0.55).epsilon(0.004));
    CHECK(share(g, FacadeComponent::window) == doctest::Approx(0.20).epsilon(0.004));
    CHECK(share(g, FacadeComponent::frame) == doctest::Approx(0.10).epsilon(0.004));
    CHECK(share(g, FacadeComponent::door) == doctest::Approx(0.15).epsilon(0.004));
    const auto u = coverage(layout, false, n);
    CHECK(share(u, FacadeComponent::main) == doctest::Approx(0.50).epsilon(0.004));
    CHECK(share(u, FacadeComponent::window) == doctest::Approx(0.25).epsilon(0.004));
    CHECK(share(u, FacadeComponent::frame) == doctest::Approx(0.10).epsilon(0.004));
    CHECK(share(u, FacadeComponent::shutter) == doctest::Approx(0.15).epsilon(0.004));
}

TEST_CASE("door is bottom-anchored and centred")
{
    const FacadeLayout layout(mixed(), FacadePattern{});
    CHECK(layout.component_at(true, 0.5, 0.01) == FacadeComponent::door);
    // 15% at the 4:6.6 door aspect cap gives a full-height strip 0.15 wide
    CHECK(layout.component_at(true, 0.5, 0.99) == FacadeComponent::door);
    CHECK(layout.component_at(true, 0.41, 0.01) != FacadeComponent::door);
    CHECK(layout.component_at(true, 0.59, 0.01) != FacadeComponent::door);
    CHECK(layout.component_at(false, 0.5, 0.5) == FacadeComponent::window);
    CHECK(layout.material_of(true, FacadeComponent::door) == kWood);
    CHECK(layout.material_of(false, FacadeComponent::shutter) == kWood);
    CHECK(layout.material_of(true, FacadeComponent::window) == kGlass);
}

TEST_CASE("random compositions keep their area shares")
{
    PathRng rng(99, 0, 0, 0, 0);
    for (int trial = 0; trial < 25; ++trial) {
        FacadeComposition c;
        int left = 100;
        int g[4];
        for (int k = 0; k < 3; ++k) {
            g[k] = static_cast<int>(rng.uniform() * (left + 1)) / 3;
            left -= g[k];
        }
        g[3] = left;
        // ground: main, windows, frames, doors; frames only with windows
        if (g[1] == 0) {
            g[3] += g[2];
            g[2] = 0;
        }
        const MaterialId mats[4] = {kBrick, kGlass, kAlu, kWood};
        for (int k = 0; k < 4; ++k) {
            c.slots[k] = {mats[k], g[k]};
        }
        c[FacadeSlot::upper_main] = {kBrick, 100};
        const FacadeLayout layout(c, FacadePattern{});
        if (!layout.warnings().empty()) {
            continue;  // clipped layouts are checked separately
        }
        const auto cov = coverage(layout, true, 800);
        for (int k = 0; k < 4; ++k) {
            const FacadeComponent comp = k == 0   ? FacadeComponent::main
                                         : k == 1 ? FacadeComponent::window
                                         : k == 2 ? FacadeComponent::frame
                                                  : FacadeComponent::door;
            CHECK(std::abs(share(cov, comp) - g[k] / 100.0) <= 0.005);
        }
    }
}

TEST_CASE("oversized components are clipped to main with a warning")
{
    FacadeComposition c = mixed();
    c[FacadeSlot::ground_main] = {kBrick, 0};
    c[FacadeSlot::ground_doors] = {kWood, 70};
    c[FacadeSlot::ground_windows] = {kGlass, 20};
    const FacadeLayout layout(c, FacadePattern{});
    CHECK_FALSE(layout.warnings().empty());
    const auto cov = coverage(layout, true, 1000);
    CHECK(share(cov, FacadeComponent::door) < 0.70);
    CHECK(share(cov, FacadeComponent::main) > 0.0);
}

TEST_CASE("invalid compositions")
{
    FacadeComposition c = mixed();
    c[FacadeSlot::ground_main].percentage = 50;
    CHECK_THROWS_AS(FacadeLayout(c, FacadePattern{}), CompositionError);
    c = mixed();
    c[FacadeSlot::upper_windows].material = kNoMaterial;
    CHECK_THROWS_AS(FacadeLayout(c, FacadePattern{}), CompositionError);
    CHECK_THROWS_AS(FacadeLayout(mixed(), FacadePattern{0.0, 2.7, 4.0}), ArgumentError);
}

TEST_CASE("tiles repeat along u and switch level above the first storey")
{
    const FacadePattern p{};
    const FacadeLayout layout(mixed(), p);
    const double perimeter = 66.0;
    const double height = 13.5;
    PathRng rng(5, 0, 0, 0, 0);
    for (int k = 0; k < 500; ++k) {
        const double u = rng.uniform() * 0.8;
        const double h = rng.uniform() * 0.95;
        const double du = p.width / perimeter;
        const double dh = p.height / height;
        const FacadePoint a = sample_component(u, h, layout, height, perimeter);
        const FacadePoint b = sample_component(u + du, h, layout, height, perimeter);
        CHECK(a.component == b.component);
        CHECK(a.material == b.material);
        if (h * height >= p.height && h + dh < 1.0) {
            const FacadePoint c = sample_component(u, h + dh, layout, height, perimeter);
            CHECK(a.component == c.component);
        }
    }
    // Bottom storey centre is door, the one above is window.
    const double u0 = 0.5 * p.width / perimeter;
    CHECK(sample_component(u0, 0.05 / height, layout, height, perimeter).component == FacadeComponent::door);
    CHECK(sample_component(u0, 1.5 * p.height / height, layout, height, perimeter).component ==
          FacadeComponent::window);
    CHECK(sample_component(u0, 1.5 * p.height / height, mixed(), p, height, perimeter).material == kGlass);
}

TEST_CASE("characteristic conductive step")
{
    CHECK(characteristic_delta(FacadePattern{}) == doctest::Approx(0.135));
    CHECK(characteristic_delta(FacadePattern{3.0, 6.0, 1.0}) == doctest::Approx(0.15));
    CHECK_THROWS_AS(characteristic_delta(FacadePattern{3.0, -1.0, 1.0}), ArgumentError);
}

TEST_CASE("facade_uv rejects points off the facade")
{
    const GridSpec grid{{0.0, 0.0}, 0.5, 32, 32};
    const EncodeResult r =
        encode_city({heatmat::test::box(1, 2.25, 2.25, 12.25, 12.25, 10.0, kBrick)}, grid,
                    heatmat::test::id_of("Asphalt"));
    std::size_t facade = 0;
    std::size_t ground = 0;
    bool got_f = false;
    bool got_g = false;
    for (std::size_t k = 0; k < r.maps.cells(); ++k) {
        if (!got_f && r.maps.has_facade(k)) {
            facade = k;
            got_f = true;
        }
        if (!got_g && !r.maps.has_facade(k)) {
            ground = k;
            got_g = true;
        }
    }
    REQUIRE(got_f);
    REQUIRE(got_g);
    Vec2 a;
    Vec2 b;
    REQUIRE(facade_chord(r.maps, facade, a, b));
    const Vec2 m = (a + b) * 0.5;
    CHECK_NOTHROW(facade_uv({m.x, m.y, 0.0}, r.maps, facade, 10.0));
    CHECK_NOTHROW(facade_uv({m.x, m.y, 10.0}, r.maps, facade, 10.0));
    CHECK_THROWS_AS(facade_uv({m.x, m.y, 10.5}, r.maps, facade, 10.0), OffFacadeError);
    CHECK_THROWS_AS(facade_uv({m.x, m.y, -0.1}, r.maps, facade, 10.0), OffFacadeError);
    CHECK_THROWS_AS(facade_uv({m.x, m.y, 1.0}, r.maps, ground, 10.0), OffFacadeError);
}
