// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Procedural facade: maps a facade-plane position (u, h) to a building
// component and its material.
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "heatmat/city_encoder.hpp"
#include "heatmat/geometry.hpp"
#include "heatmat/map_store.hpp"

namespace heatmat {

enum class FacadeComponent : std::uint8_t { main, window, frame, door, shutter };

std::string_view to_string(FacadeComponent c);

struct FacadePattern {
    double width = 6.6;
    double height = 2.7;
    double max_door_width = 4.0;

    /// Throws ArgumentError unless every dimension is positive.
    void validate() const;
};

struct FacadePoint {
    double u = 0.0;
    double h = 0.0;
    FacadeComponent component = FacadeComponent::main;
    MaterialId material = kNoMaterial;
};

/// Tile layout for one (composition, pattern) pair, in tile-normalized
/// coordinates. Rectangles are tested in order; anything left over is main.
class FacadeLayout {
public:
    struct Rect {
        double x0, x1, y0, y1;
        FacadeComponent component;
        bool contains(double x, double y) const
        {
            return x >= x0 && x <= x1 && y >= y0 && y <= y1;
        }
    };

    /// Throws CompositionError when a level does not sum to 100 or a used
    /// component has no material.
    FacadeLayout(const FacadeComposition& composition, const FacadePattern& pattern);

    /// Component at tile-local position (fx, fy) in [0,1]^2 on the given level.
    FacadeComponent component_at(bool ground, double fx, double fy) const;
    MaterialId material_of(bool ground, FacadeComponent c) const;

    const FacadePattern& pattern() const { return pattern_; }
    const std::vector<Rect>& ground_rects() const { return ground_; }
    const std::vector<Rect>& upper_rects() const { return upper_; }
    /// Area clipped from a component and given to main, one line each.
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    FacadeComposition composition_;
    FacadePattern pattern_;
    std::vector<Rect> ground_;
    std::vector<Rect> upper_;
    std::vector<std::string> warnings_;
};

struct FacadeUV {
    double u = 0.0;
    double h = 0.0;
};

/// Projects a point on the facade chord of cell `idx` to (u, h). Throws
/// OffFacadeError when z lies outside [0, building_height] or the cell has
/// no facade.
FacadeUV facade_uv(Vec3 point, const MapSet& maps, std::size_t idx, double building_height);

FacadePoint sample_component(double u, double h, const FacadeLayout& layout,
                             double building_height, double perimeter);
FacadePoint sample_component(double u, double h, const FacadeComposition& composition,
                             const FacadePattern& pattern, double building_height,
                             double perimeter);

/// Conductive step length: min(pattern width, pattern height) / 20.
double characteristic_delta(const FacadePattern& pattern);

}  // namespace heatmat
