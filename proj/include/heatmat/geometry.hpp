// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Small fixed-size vector types and planar geometry helpers.
#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace heatmat {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    constexpr bool operator==(const Vec2&) const = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double length(Vec2 a) { return std::hypot(a.x, a.y); }

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Vec3 operator+(Vec3 o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Vec3 operator-(Vec3 o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr Vec3 operator-() const { return {-x, -y, -z}; }
    constexpr Vec2 xy() const { return {x, y}; }
};

constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(Vec3 a, Vec3 b)
{
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double length(Vec3 a) { return std::sqrt(dot(a, a)); }
inline Vec3 normalized(Vec3 a) { return a * (1.0 / length(a)); }

struct Segment2 {
    Vec2 a;
    Vec2 b;
};

/// Euclidean distance from p to the closed segment [s.a, s.b].
double point_segment_distance(Vec2 p, const Segment2& s);

/// Shoelace area, positive for counter-clockwise rings. The ring is implicitly closed.
double signed_area(std::span<const Vec2> ring);

/// Sutherland-Hodgman clip of an arbitrary simple ring against an axis-aligned
/// rectangle. The result may contain degenerate edges for concave input, but
/// its signed area is exact.
std::vector<Vec2> clip_to_rect(std::span<const Vec2> ring, Vec2 lo, Vec2 hi);

/// True when no two non-adjacent edges of the closed ring intersect.
bool is_simple_ring(std::span<const Vec2> ring);

/// Outward normal azimuth in [0, 2pi), clockwise from north (+y), for a
/// horizontal normal vector.
double azimuth_of(Vec2 normal);

/// Unit horizontal vector for an azimuth measured clockwise from north.
inline Vec2 from_azimuth(double azimuth) { return {std::sin(azimuth), std::cos(azimuth)}; }

}  // namespace heatmat
