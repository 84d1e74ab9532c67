// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Footprint polygons to MapSet: largest-overlap rasterization, one facade
// chord per boundary cell, discrete facade SDF and the perimeter
// parameterization.
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "heatmat/geometry.hpp"
#include "heatmat/map_store.hpp"
#include "heatmat/material_db.hpp"

namespace heatmat {

struct SlotValue {
    MaterialId material = kNoMaterial;
    int percentage = 0;
    bool operator==(const SlotValue&) const = default;
};

struct FacadeComposition {
    std::array<SlotValue, kFacadeSlotCount> slots{};

    SlotValue& operator[](FacadeSlot s) { return slots[static_cast<int>(s)]; }
    const SlotValue& operator[](FacadeSlot s) const { return slots[static_cast<int>(s)]; }
    bool operator==(const FacadeComposition&) const = default;

    int ground_sum() const;
    int upper_sum() const;
    /// Rescales each level to sum to 100 (largest remainder). A level whose
    /// percentages are all zero becomes 100% main material.
    void normalize();
};

struct BuildingFootprint {
    std::uint32_t id = 0;
    std::vector<Vec2> polygon;  // exterior ring, no repeated closing vertex
    double height = 0.0;
    MaterialId roof_material = kNoMaterial;
    FacadeComposition composition;
};

/// One simplified facade piece: the straight chord a -> b inside `cell`,
/// travelling counter-clockwise around building `building`.
struct FacadeSegment {
    std::uint32_t building = 0;
    CellIndex cell;
    Vec2 a;
    Vec2 b;
    double arc_start = 0.0;  // arc length of the chain start along the original ring
};

struct CornerResult {
    std::vector<FacadeSegment> segments;  // in traversal order
    std::vector<CellIndex> flagged;
};

struct RasterReport {
    int clipped_footprints = 0;  // footprints extending past the grid
    std::vector<std::pair<std::uint32_t, std::string>> rejected;
};

/// Normalizes orientation to CCW, drops a repeated closing vertex and checks
/// the footprint. Returns an empty string when valid, the reason otherwise.
std::string prepare_footprint(BuildingFootprint& fp);

/// Index of the vertex with lexicographically smallest (y, x).
std::size_t traversal_origin(std::span<const Vec2> ring);

MapSet rasterize_footprints(std::span<const BuildingFootprint> footprints, const GridSpec& grid,
                            MaterialId ground_material, RasterReport* report = nullptr);

/// `fp` must already be prepared (CCW, simple).
CornerResult simplify_corners(const BuildingFootprint& fp, const GridSpec& grid);

/// Distance from every non-building centroid to the nearest segment; building
/// cells get 0 and scenes without segments get +infinity.
std::vector<double> compute_sdf(std::span<const FacadeSegment> segments, const GridSpec& grid,
                                std::span<const std::uint32_t> building_id);

struct UEntry {
    CellIndex cell;
    double u = 0.0;
    double perimeter = 0.0;
    double azimuth = 0.0;  // outward normal, clockwise from north
    double offset = 0.0;   // signed chord offset from the centroid along the normal
};

/// Segments of a single building in traversal order (as from simplify_corners).
std::vector<UEntry> compute_umap(std::span<const FacadeSegment> segments, const GridSpec& grid);

std::uint16_t pack_slot(SlotValue v);
SlotValue unpack_slot(std::uint16_t packed);
std::array<std::uint16_t, kFacadeSlotCount> pack_facade_slots(const FacadeComposition& c);
FacadeComposition unpack_facade_slots(const std::array<std::uint16_t, kFacadeSlotCount>& packed);

struct EncodeResult {
    MapSet maps;
    std::vector<FacadeSegment> segments;
    RasterReport report;
};

/// Full pipeline. Throws EncodeError listing flagged cells when a cell would
/// need more than one facade segment, and ArgumentError on duplicate ids.
EncodeResult encode_city(std::vector<BuildingFootprint> footprints, const GridSpec& grid,
                         MaterialId ground_material);

/// Chord of a facade cell rebuilt from the stored azimuth and offset: the
/// outward line clipped to the cell square, oriented along the travel direction.
bool facade_chord(const MapSet& maps, std::size_t idx, Vec2& a, Vec2& b);

}  // namespace heatmat
