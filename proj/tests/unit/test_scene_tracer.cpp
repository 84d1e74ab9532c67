// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "fixtures.hpp"
#include "heatmat/city_scene.hpp"
#include "heatmat/rng.hpp"
#include "heatmat/scene_tracer.hpp"
#include "heatmat/solar_model.hpp"
#include "heatmat/transport.hpp"

using namespace heatmat;

namespace {

constexpr double kX0 = 20.25;
constexpr double kX1 = 30.25;
constexpr double kY0 = 20.25;
constexpr double kY1 = 30.25;
constexpr double kH = 10.0;

struct BoxWorld {
    EncodeResult enc;
    CityScene scene;
    TraceConfig cfg;

    BoxWorld()
        : enc(encode_city({heatmat::test::box(1, kX0, kY0, kX1, kY1, kH, heatmat::test::id_of("Concrete"))},
                          GridSpec{{0.0, 0.0}, 0.5, 100, 100}, heatmat::test::id_of("Asphalt"))),
          scene(enc.maps, FacadePattern{}),
          cfg(TraceConfig::for_grid(enc.maps.grid))
    {
    }
};

const BoxWorld& world()
{
    static const BoxWorld w;
    return w;
}

// Slab-method intersection with the box solid and the ground plane.
struct Analytic {
    HitKind kind = HitKind::sky;
    double t = std::numeric_limits<double>::infinity();
    Vec3 normal;
};

Analytic analytic(Vec3 o, Vec3 d)
{
    Analytic a;
    double t0 = 0.0;
    double t1 = std::numeric_limits<double>::infinity();
    Vec3 n0;
    const double lo[3] = {kX0, kY0, -1e9};
    const double hi[3] = {kX1, kY1, kH};
    const double oo[3] = {o.x, o.y, o.z};
    const double dd[3] = {d.x, d.y, d.z};
    bool miss = false;
    for (int k = 0; k < 3; ++k) {
        if (dd[k] == 0.0) {
            miss |= oo[k] < lo[k] || oo[k] > hi[k];
            continue;
        }
        double ta = (lo[k] - oo[k]) / dd[k];
        double tb = (hi[k] - oo[k]) / dd[k];
        Vec3 n;
        (k == 0 ? n.x : k == 1 ? n.y : n.z) = dd[k] > 0.0 ? -1.0 : 1.0;
        if (ta > tb) {
            std::swap(ta, tb);
        }
        if (ta > t0) {
            t0 = ta;
            n0 = n;
        }
        t1 = std::min(t1, tb);
    }
    if (!miss && t0 <= t1) {
        a.t = t0;
        a.normal = n0;
        a.kind = n0.z != 0.0 ? HitKind::roof : HitKind::facade;
    }
    if (d.z < 0.0 && -o.z / d.z < a.t) {
        a.t = -o.z / d.z;
        a.kind = HitKind::ground;
        a.normal = {0, 0, 1};
    }
    return a;
}

bool near_vertical_edge(Vec3 p)
{
    const double xs[2] = {kX0, kX1};
    const double ys[2] = {kY0, kY1};
    for (double x : xs) {
        for (double y : ys) {
            if (std::hypot(p.x - x, p.y - y) < 1.0) {
                return true;
            }
        }
    }
    return false;
}

}  // namespace

TEST_CASE("axis rays hit the expected surfaces")
{
    const auto& w = world();
    Hit h = sphere_trace({{5.0, 25.1, 3.0}, {1, 0, 0}}, w.scene, w.cfg);
    CHECK(h.kind == HitKind::facade);
    CHECK(h.point.x == doctest::Approx(kX0).epsilon(1e-9));
    CHECK(h.normal.x == doctest::Approx(-1.0));
    CHECK(h.building_id == 1);
    CHECK(h.facade_cell >= 0);

    h = sphere_trace({{25.1, 25.1, 40.0}, {0, 0, -1}}, w.scene, w.cfg);
    CHECK(h.kind == HitKind::roof);
    CHECK(h.point.z == doctest::Approx(kH));

    h = sphere_trace({{45.1, 45.1, 5.0}, {0, 0, -1}}, w.scene, w.cfg);
    CHECK(h.kind == HitKind::ground);
    CHECK(h.point.z == doctest::Approx(0.0));

    h = sphere_trace({{45.1, 45.1, 0.05}, normalized(Vec3{0.2, 0.1, 1.0})}, w.scene, w.cfg);
    CHECK(h.kind == HitKind::sky);

    h = sphere_trace({{45.1, 45.1, 5.0}, {1, 0, 0}}, w.scene, w.cfg);
    CHECK(h.kind == HitKind::domain_edge);

    h = sphere_trace({{5.0, 25.1, 11.0}, {1, 0, 0}}, w.scene, w.cfg);
    CHECK(h.kind != HitKind::facade);
}

TEST_CASE("random rays agree with the analytic box")
{
    const auto& w = world();
    PathRng rng(2024, 0, 0, 0, 0);
    int compared = 0;
    for (int k = 0; k < 4000; ++k) {
        const Vec3 o{2.0 + 46.0 * rng.uniform(), 2.0 + 46.0 * rng.uniform(), 0.05 + 14.0 * rng.uniform()};
        if (o.x > kX0 - 0.1 && o.x < kX1 + 0.1 && o.y > kY0 - 0.1 && o.y < kY1 + 0.1 && o.z < kH + 0.1) {
            continue;
        }
        const double ct = 2.0 * rng.uniform() - 1.0;
        const double ph = 2.0 * kPi * rng.uniform();
        const double st = std::sqrt(1.0 - ct * ct);
        const Vec3 d{st * std::cos(ph), st * std::sin(ph), ct};
        const Analytic a = analytic(o, d);
        const Hit h = sphere_trace({o, d}, w.scene, w.cfg);
        if (a.kind == HitKind::sky) {
            CHECK((h.kind == HitKind::sky || h.kind == HitKind::domain_edge));
            continue;
        }
        const Vec3 p = o + d * a.t;
        if (near_vertical_edge(p) || p.x < 0.5 || p.y < 0.5 || p.x > 49.5 || p.y > 49.5) {
            continue;
        }
        if (a.kind == HitKind::ground && h.kind == HitKind::domain_edge) {
            continue;  // ground hit beyond the raster
        }
        ++compared;
        CHECK(h.kind == a.kind);
        CHECK(length(h.point - p) < 1e-6);
        if (a.kind == HitKind::facade) {
            CHECK(dot(h.normal, a.normal) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("shadow of an isolated box at 45 degrees is as long as the box is tall")
{
    const auto& w = world();
    // Sun in the west: the shadow falls east of the east wall.
    const Vec3 sun = sun_vector(kPi / 4, 3 * kPi / 2);
    const double y = 25.25;
    double last_shadow = 0.0;
    for (double x = kX1 + 0.05; x < 48.0; x += 0.05) {
        if (occluded_toward_sun({x, y, 0.0}, {0, 0, 1}, sun, w.scene, w.cfg)) {
            last_shadow = x;
        }
    }
    CHECK(last_shadow - kX1 == doctest::Approx(kH).epsilon(0.05));
    CHECK_FALSE(occluded_toward_sun({kX0 - 1.0, y, 0.0}, {0, 0, 1}, sun, w.scene, w.cfg));
    // Sun below the horizon or behind the surface.
    CHECK(occluded_toward_sun({5.0, 5.0, 0.0}, {0, 0, 1}, sun_vector(-0.1, 0.0), w.scene, w.cfg));
    CHECK(occluded_toward_sun({kX1, y, 5.0}, {1, 0, 0}, sun, w.scene, w.cfg));
}

TEST_CASE("step budget exhaustion is reported")
{
    const auto& w = world();
    TraceConfig tight = w.cfg;
    tight.max_steps = 2;
    const Hit h = sphere_trace({{1.0, 25.1, 3.0}, {1, 0, 0}}, w.scene, tight);
    CHECK(h.kind == HitKind::exhausted);
}

TEST_CASE("cosine hemisphere directions stay on the normal side")
{
    PathRng rng(3, 0, 0, 0, 0);
    const Vec3 n = normalized(Vec3{0.3, -0.4, 0.8});
    for (int k = 0; k < 1000; ++k) {
        const Vec3 d = cosine_sample_hemisphere(n, rng);
        CHECK(length(d) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dot(d, n) >= 0.0);
    }
}
