// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference solvers and comparison metrics used to cross-check the Monte
// Carlo kernel.
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heatmat/geometry.hpp"
#include "heatmat/map_store.hpp"
#include "heatmat/material_db.hpp"
#include "heatmat/solar_model.hpp"

namespace heatmat {

/// Square plate of size x size nodes. The outer ring holds the edge
/// temperatures; corners take the mean of their two edges.
struct ConductionProblem {
    int size = 64;
    Material material;
    double top = 1.0;
    double bottom = 1.0;
    double left = 0.0;
    double right = 0.0;
    Raster initial;  // optional starting field, size x size

    void validate() const;
    /// Edge value for a boundary node, NaN for interior nodes.
    double boundary(int i, int j) const;
};

struct FdmResult {
    Raster field;
    int iterations = 0;
    double residual = 0.0;        // last max per-cell update
    std::vector<double> history;  // per-iteration residual when requested
};

/// Jacobi relaxation of the 5-point Laplacian until the max update falls
/// below `tolerance`. Throws ConvergenceError after `max_iterations`.
FdmResult fdm_steady_conduction(const ConductionProblem& problem, double tolerance,
                                int max_iterations = 2'000'000, bool keep_history = false);

struct WalkResult {
    Raster temperature;
    Raster std_error;
};

/// 2D walks of step `delta` (node spacings) from every interior node. Within
/// delta of an edge the step shrinks to the edge distance; a walk ends within
/// 1e-4 delta of an edge and scores that edge. Deterministic for a given seed at any thread count.
WalkResult walk_steady_conduction(const ConductionProblem& problem, int walks_per_cell,
                                  double delta, std::uint64_t seed = 1, int threads = 0);

/// mean |candidate - reference| / (max(reference) - min(reference)) * 100.
double scaled_difference(const Raster& candidate, const Raster& reference);
double rmse(const Raster& a, const Raster& b);

/// Exact minimum distance from p to any segment. Throws ArgumentError if empty.
double brute_force_sdf(std::span<const Segment2> segments, Vec2 p);

/// Pixel-centre bilinear resampling with clamped edges.
Raster resample_bilinear(const Raster& in, int width, int height);

/// Sun position from the PSA algorithm, an independent second implementation.
SunPosition psa_sun_position(double latitude_deg, double longitude_deg, const LocalDateTime& when);

struct EphemerisCase {
    double latitude_deg;
    double longitude_deg;
    const char* local_time;
    double utc_offset_h;
    double elevation_deg;
    double azimuth_deg;
};

/// Reference positions computed with NREL SPA (geometric elevation).
std::span<const EphemerisCase> ephemeris_reference();

/// Great-circle angle between two sun directions, in degrees.
double angular_separation_deg(Vec3 a, Vec3 b);

/// Open-ground cells within `max_distance_m` of a facade whose centroid sees
/// the sun. 1 = selected.
std::vector<std::uint8_t> sunlit_near_facade_mask(const MapSet& maps, Vec3 sun_direction,
                                                  double max_distance_m);

struct WhatIfSummary {
    std::size_t cells = 0;
    std::size_t non_negative = 0;
    double fraction_non_negative = 0.0;
    double max_difference = 0.0;
    double mean_difference = 0.0;
};

/// Statistics of `diff` over the masked, finite cells.
WhatIfSummary summarize_difference(const Raster& diff, const std::vector<std::uint8_t>& mask);

}  // namespace heatmat
