// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/geometry.hpp"

#include <algorithm>

namespace heatmat {

double point_segment_distance(Vec2 p, const Segment2& s)
{
    const Vec2 d = s.b - s.a;
    const double len2 = dot(d, d);
    double t = 0.0;
    if (len2 > 0.0) {
        t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    }
    return length(p - (s.a + d * t));
}

double signed_area(std::span<const Vec2> ring)
{
    double acc = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        acc += cross(ring[i], ring[(i + 1) % n]);
    }
    return 0.5 * acc;
}

namespace {

// One Sutherland-Hodgman pass against the half-plane sign * (coord - bound) >= 0.
std::vector<Vec2> clip_pass(const std::vector<Vec2>& in, int axis, double bound, double sign)
{
    std::vector<Vec2> out;
    if (in.empty()) {
        return out;
    }
    out.reserve(in.size() + 4);
    auto inside = [&](Vec2 v) { return sign * ((axis == 0 ? v.x : v.y) - bound) >= 0.0; };
    auto intersect = [&](Vec2 a, Vec2 b) {
        const double ca = axis == 0 ? a.x : a.y;
        const double cb = axis == 0 ? b.x : b.y;
        const double t = (bound - ca) / (cb - ca);
        Vec2 r = a + (b - a) * t;
        (axis == 0 ? r.x : r.y) = bound;
        return r;
    };
    Vec2 prev = in.back();
    bool prev_in = inside(prev);
    for (Vec2 cur : in) {
        const bool cur_in = inside(cur);
        if (cur_in) {
            if (!prev_in) {
                out.push_back(intersect(prev, cur));
            }
            out.push_back(cur);
        } else if (prev_in) {
            out.push_back(intersect(prev, cur));
        }
        prev = cur;
        prev_in = cur_in;
    }
    return out;
}

bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2)
{
    auto orient = [](Vec2 a, Vec2 b, Vec2 c) {
        const double v = cross(b - a, c - a);
        return (v > 0.0) - (v < 0.0);
    };
    auto on_segment = [](Vec2 a, Vec2 b, Vec2 c) {
        return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
               std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
    };
    const int o1 = orient(p1, p2, q1);
    const int o2 = orient(p1, p2, q2);
    const int o3 = orient(q1, q2, p1);
    const int o4 = orient(q1, q2, p2);
    if (o1 != o2 && o3 != o4) {
        return true;
    }
    return (o1 == 0 && on_segment(p1, p2, q1)) || (o2 == 0 && on_segment(p1, p2, q2)) ||
           (o3 == 0 && on_segment(q1, q2, p1)) || (o4 == 0 && on_segment(q1, q2, p2));
}

}  // namespace

std::vector<Vec2> clip_to_rect(std::span<const Vec2> ring, Vec2 lo, Vec2 hi)
{
    std::vector<Vec2> poly(ring.begin(), ring.end());
    poly = clip_pass(poly, 0, lo.x, 1.0);
    poly = clip_pass(poly, 0, hi.x, -1.0);
    poly = clip_pass(poly, 1, lo.y, 1.0);
    poly = clip_pass(poly, 1, hi.y, -1.0);
    return poly;
}

bool is_simple_ring(std::span<const Vec2> ring)
{
    const std::size_t n = ring.size();
    if (n < 3) {
        return false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a1 = ring[i];
        const Vec2 a2 = ring[(i + 1) % n];
        if (a1 == a2) {
            return false;
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            // Adjacent edges share a vertex by construction.
            if (j == i + 1 || (i == 0 && j == n - 1)) {
                continue;
            }
            if (segments_intersect(a1, a2, ring[j], ring[(j + 1) % n])) {
                return false;
            }
        }
    }
    return true;
}

double azimuth_of(Vec2 normal)
{
    double az = std::atan2(normal.x, normal.y);
    if (az < 0.0) {
        az += 2.0 * kPi;
    }
    if (az >= 2.0 * kPi) {
        az -= 2.0 * kPi;
    }
    return az;
}

}  // namespace heatmat
