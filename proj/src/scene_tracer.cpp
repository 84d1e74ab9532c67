// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/scene_tracer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace heatmat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Interval {
    double lo = -kInf;
    double hi = kInf;
    bool empty() const { return lo > hi; }
};

// Parameter range where z(t) = oz + t dz stays below `top`.
Interval below(double oz, double dz, double top)
{
    if (dz == 0.0) {
        return oz < top ? Interval{} : Interval{kInf, -kInf};
    }
    const double tz = (top - oz) / dz;
    return dz > 0.0 ? Interval{-kInf, tz} : Interval{tz, kInf};
}

// Parameter range where the ray lies on the inner (solid) side of a chord line.
Interval inside_halfplane(Vec3 o, Vec3 d, Vec2 c, const Chord& ch)
{
    const double g0 = dot(o.xy() - c, ch.normal) - ch.offset;
    const double gd = dot(d.xy(), ch.normal);
    if (gd == 0.0) {
        return g0 <= 0.0 ? Interval{} : Interval{kInf, -kInf};
    }
    const double th = -g0 / gd;
    return gd > 0.0 ? Interval{-kInf, th} : Interval{th, kInf};
}

std::int64_t facade_cell_for(const CityScene& scene, std::int64_t idx, std::int64_t prev,
                             std::uint32_t building, Vec2 p)
{
    if (const Chord* c = scene.chord(static_cast<std::size_t>(idx)); c && c->building == building) {
        return idx;
    }
    if (prev >= 0) {
        if (const Chord* c = scene.chord(static_cast<std::size_t>(prev)); c && c->building == building) {
            return prev;
        }
    }
    const GridSpec& g = scene.grid();
    const int i = static_cast<int>(idx % g.width);
    const int j = static_cast<int>(idx / g.width);
    std::int64_t best = -1;
    double best_d = kInf;
    for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
            if (!g.in_range(i + di, j + dj)) {
                continue;
            }
            const auto k = static_cast<std::int64_t>(g.index(i + di, j + dj));
            const Chord* c = scene.chord(static_cast<std::size_t>(k));
            if (!c || c->building != building) {
                continue;
            }
            const double dist = point_segment_distance(p, {c->a, c->b});
            if (dist < best_d) {
                best_d = dist;
                best = k;
            }
        }
    }
    return best;
}

}  // namespace

std::string_view to_string(HitKind k)
{
    switch (k) {
    case HitKind::facade: return "facade";
    case HitKind::roof: return "roof";
    case HitKind::ground: return "ground";
    case HitKind::sky: return "sky";
    case HitKind::domain_edge: return "domain_edge";
    case HitKind::exhausted: return "exhausted";
    }
    return "?";
}

TraceConfig TraceConfig::for_grid(const GridSpec& grid)
{
    TraceConfig c;
    c.eps_hit = grid.cell_size / 10.0;
    c.eps_min = grid.cell_size / 20.0;
    return c;
}

Hit sphere_trace(const Ray& ray, const CityScene& scene, const TraceConfig& cfg)
{
    const MapSet& maps = scene.maps();
    const GridSpec& g = maps.grid;
    const double s = g.cell_size;
    const Vec3 o = ray.origin;
    const Vec3 d = ray.direction;
    const double hxy = std::hypot(d.x, d.y);
    const double top = scene.max_height();
    const Vec2 ghi = g.extent_hi();
    const double max_leap = length(ghi - g.origin) + s;

    Hit hit;
    auto finish = [&](HitKind kind, double t, Vec3 normal, std::uint32_t building,
                      std::int64_t cell) {
        hit.kind = kind;
        hit.travel = t;
        hit.point = o + d * t;
        hit.normal = normal;
        hit.building_id = building;
        hit.cell = cell;
        return hit;
    };

    double t = 0.0;
    bool have_cell = false;
    bool fresh = true;  // current cell was not entered through a face
    int ci = 0;
    int cj = 0;
    std::int64_t prev = -1;
    Vec3 face_normal;

    for (;;) {
        if (++hit.steps > cfg.max_steps) {
            return finish(HitKind::exhausted, t, {}, 0, -1);
        }
        Vec3 p = o + d * t;
        if (p.z > top) {
            if (d.z >= 0.0) {
                return finish(HitKind::sky, t, {}, 0, -1);
            }
            t = std::max(t, (top - o.z) / d.z);
            p = o + d * t;
            have_cell = false;
        }
        if (!have_cell) {
            const Vec3 q = p + d * (1e-9 * s);
            const auto c = g.locate(q.xy());
            if (!c) {
                return finish(HitKind::domain_edge, t, {}, 0, -1);
            }
            ci = c->i;
            cj = c->j;
            have_cell = true;
            fresh = true;
            prev = -1;
        }
        const auto idx = static_cast<std::int64_t>(g.index(ci, cj));
        const auto uidx = static_cast<std::size_t>(idx);
        const Chord* chord = scene.chord(uidx);
        const std::uint32_t bid = maps.building_id[uidx];

        if (!chord && bid == 0 && hxy > 0.0) {
            const double r = std::min(maps.sdf_m[uidx], max_leap) - length(p.xy() - g.centroid(ci, cj)) -
                             std::sqrt(2.0) * s;
            if (r > s && r > cfg.eps_min) {
                const double dt = r / hxy;
                if (d.z < 0.0) {
                    const double tg = -o.z / d.z;
                    if (tg <= t + dt) {
                        const double tt = std::max(tg, t);
                        const auto gc = g.locate((o + d * tt).xy());
                        return finish(HitKind::ground, tt, {0, 0, 1}, 0,
                                      gc ? static_cast<std::int64_t>(g.index(*gc)) : idx);
                    }
                }
                t += dt;
                have_cell = false;
                continue;
            }
        }

        // Exit of the current cell along the ray.
        const Vec2 lo = g.cell_lo(ci, cj);
        const double tx = d.x > 0.0   ? (lo.x + s - o.x) / d.x
                          : d.x < 0.0 ? (lo.x - o.x) / d.x
                                      : kInf;
        const double ty = d.y > 0.0   ? (lo.y + s - o.y) / d.y
                          : d.y < 0.0 ? (lo.y - o.y) / d.y
                                      : kInf;
        const double t1 = std::max(t, std::min(tx, ty));

        // Exact intersection with the solids of this cell.
        double best_t = kInf;
        HitKind best_kind = HitKind::sky;
        Vec3 best_n;
        std::uint32_t best_b = 0;
        std::int64_t best_fc = -1;
        if (chord || bid != 0) {
            const double height = chord ? chord->height : static_cast<double>(maps.height_m[uidx]);
            const std::uint32_t owner = chord ? chord->building : bid;
            const Interval z = below(o.z, d.z, height);
            const Interval h = chord ? inside_halfplane(o, d, g.centroid(ci, cj), *chord) : Interval{};
            const double enter = std::max({t, z.lo, h.lo});
            const double leave = std::min({t1, z.hi, h.hi});
            if (enter <= leave) {
                if (chord && h.lo >= z.lo && h.lo >= t) {
                    best_t = enter;
                    best_kind = HitKind::facade;
                    best_n = {chord->normal.x, chord->normal.y, 0.0};
                    best_fc = idx;
                } else if (z.lo >= t && z.lo > h.lo) {
                    best_t = enter;
                    best_kind = HitKind::roof;
                    best_n = {0, 0, 1};
                } else if (!fresh) {
                    best_t = enter;
                    best_kind = HitKind::facade;
                    best_n = face_normal;
                    best_fc = facade_cell_for(scene, idx, prev, owner, (o + d * enter).xy());
                }
                best_b = owner;
            }
        }
        if (d.z < 0.0) {
            const double tg = -o.z / d.z;
            if (tg > t - 1e-12 && tg <= t1 && tg < best_t) {
                best_t = std::max(tg, t);
                best_kind = HitKind::ground;
                best_n = {0, 0, 1};
                best_b = 0;
                best_fc = -1;
            }
        }
        if (best_t < kInf) {
            hit.facade_cell = best_fc;
            return finish(best_kind, best_t, best_n, best_b, idx);
        }
        if (t1 == kInf) {
            return finish(d.z >= 0.0 ? HitKind::sky : HitKind::ground, t1, {0, 0, 1}, 0, idx);
        }

        // Step to the next cell.
        prev = idx;
        fresh = false;
        if (tx <= ty) {
            ci += d.x > 0.0 ? 1 : -1;
            face_normal = {d.x > 0.0 ? -1.0 : 1.0, 0.0, 0.0};
        }
        if (ty <= tx) {
            cj += d.y > 0.0 ? 1 : -1;
            face_normal = tx == ty ? face_normal : Vec3{0.0, d.y > 0.0 ? -1.0 : 1.0, 0.0};
        }
        t = t1;
        if (!g.in_range(ci, cj)) {
            return finish(HitKind::domain_edge, t, {}, 0, -1);
        }
    }
}

bool occluded_toward_sun(Vec3 point, Vec3 normal, Vec3 sun_direction, const CityScene& scene,
                         const TraceConfig& cfg)
{
    if (sun_direction.z <= 0.0 || dot(normal, sun_direction) <= 0.0) {
        return true;
    }
    const Hit h = sphere_trace({point + normal * cfg.eps_hit, sun_direction}, scene, cfg);
    return h.kind != HitKind::sky && h.kind != HitKind::domain_edge;
}

}  // namespace heatmat
