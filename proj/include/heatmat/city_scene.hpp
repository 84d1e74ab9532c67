// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Read-only geometric and material view of a MapSet used by the tracer and
// the transport kernel.
#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "heatmat/facade_sampler.hpp"
#include "heatmat/map_store.hpp"
#include "heatmat/material_db.hpp"

namespace heatmat {

struct Chord {
    Vec2 normal;  // outward, unit
    double offset = 0.0;
    Vec2 a;  // travel order a -> b
    Vec2 b;
    double length = 0.0;
    std::uint32_t building = 0;
    double height = 0.0;
    int layout = -1;  // index into CityScene::layouts()
    std::size_t cell = 0;
    double s_start = 0.0;    // arc length of `a` along the building outline
    double perimeter = 0.0;  // total outline length
};

struct BuildingInfo {
    double height = 0.0;
    MaterialId roof_material = kNoMaterial;
};

class CityScene {
public:
    /// Throws ArgumentError when a facade cell references an unknown
    /// building or a facade composition is invalid.
    CityScene(const MapSet& maps, const FacadePattern& pattern);

    const MapSet& maps() const { return *maps_; }
    const GridSpec& grid() const { return maps_->grid; }
    const FacadePattern& pattern() const { return pattern_; }
    double max_height() const { return max_height_; }

    /// Chord of a facade cell, or nullptr.
    const Chord* chord(std::size_t idx) const
    {
        const int k = chord_index_[idx];
        return k < 0 ? nullptr : &chords_[k];
    }
    const std::vector<Chord>& chords() const { return chords_; }
    const BuildingInfo* building(std::uint32_t id) const;
    /// Chords of one building ordered by arc length; empty when unknown.
    const std::vector<int>& outline(std::uint32_t id) const;
    /// Building whose solid covers q at ground level, 0 for open ground.
    std::uint32_t owner_at(Vec2 q) const;
    const std::vector<FacadeLayout>& layouts() const { return layouts_; }

    /// Layout for the composition packed into the facade slots of cell idx.
    const FacadeLayout& layout_at(std::size_t idx) const;

private:
    const MapSet* maps_;
    FacadePattern pattern_;
    std::vector<int> chord_index_;
    std::vector<Chord> chords_;
    std::unordered_map<std::uint32_t, BuildingInfo> buildings_;
    std::unordered_map<std::uint32_t, std::vector<int>> outlines_;
    std::vector<FacadeLayout> layouts_;
    std::vector<int> cell_layout_;
    double max_height_ = 0.0;
};

}  // namespace heatmat
