// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Ray queries against the 2.5D scene.
//
// Far from facades the march takes conservative sphere steps bounded by the
// stored facade distance. Close to them it walks cell by cell and intersects
// the ray exactly with each cell's solid: a full column for interior
// building cells, the chord half-space capped at the owner's height for
// facade cells, and the ground slab z < 0 everywhere.
#pragma once

#include <cstdint>
#include <string_view>

#include "heatmat/city_scene.hpp"
#include "heatmat/geometry.hpp"

namespace heatmat {

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
};

enum class HitKind : std::uint8_t { facade, roof, ground, sky, domain_edge, exhausted };

std::string_view to_string(HitKind k);

struct Hit {
    HitKind kind = HitKind::sky;
    Vec3 point;
    Vec3 normal;
    std::uint32_t building_id = 0;
    double travel = 0.0;
    std::int64_t cell = -1;         // grid cell under the hit point
    std::int64_t facade_cell = -1;  // chord cell describing a facade hit, -1 if none
    int steps = 0;
};

struct TraceConfig {
    double eps_hit = 0.05;   // surface offset and hit tolerance, meters
    double eps_min = 0.025;  // minimum sphere step, meters
    int max_steps = 512;

    /// eps_hit = cell/10, eps_min = cell/20.
    static TraceConfig for_grid(const GridSpec& grid);
};

Hit sphere_trace(const Ray& ray, const CityScene& scene, const TraceConfig& cfg);

/// True when the sun is below the horizon, behind the surface, or any
/// surface blocks the ray from `point + eps_hit * normal` toward it.
bool occluded_toward_sun(Vec3 point, Vec3 normal, Vec3 sun_direction, const CityScene& scene,
                         const TraceConfig& cfg);

}  // namespace heatmat
