// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/city_scene.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "heatmat/city_encoder.hpp"
#include "heatmat/errors.hpp"

namespace heatmat {

CityScene::CityScene(const MapSet& maps, const FacadePattern& pattern)
    : maps_(&maps), pattern_(pattern)
{
    pattern_.validate();
    const std::size_t n = maps.cells();
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint32_t id = maps.building_id[k];
        if (id == 0) {
            continue;
        }
        BuildingInfo& info = buildings_[id];
        info.height = maps.height_m[k];
        if (info.roof_material == kNoMaterial) {
            info.roof_material = maps.roof_material[k];
        }
        max_height_ = std::max(max_height_, info.height);
    }

    std::map<std::array<std::uint16_t, kFacadeSlotCount>, int> seen;
    cell_layout_.assign(n, -1);
    for (std::size_t k = 0; k < n; ++k) {
        if (maps.building_id[k] == 0 && !maps.has_facade(k)) {
            continue;
        }
        std::array<std::uint16_t, kFacadeSlotCount> key{};
        for (int s = 0; s < kFacadeSlotCount; ++s) {
            key[s] = maps.facade_slots[s][k];
        }
        auto it = seen.find(key);
        if (it == seen.end()) {
            layouts_.emplace_back(unpack_facade_slots(key), pattern_);
            it = seen.emplace(key, static_cast<int>(layouts_.size()) - 1).first;
        }
        cell_layout_[k] = it->second;
    }

    chord_index_.assign(n, -1);
    for (std::size_t k = 0; k < n; ++k) {
        if (!maps.has_facade(k)) {
            continue;
        }
        Chord c;
        if (!facade_chord(maps, k, c.a, c.b)) {
            continue;
        }
        c.normal = from_azimuth(maps.facade_azimuth_rad[k]);
        c.offset = maps.facade_offset_m[k];
        c.length = length(c.b - c.a);
        c.building = maps.facade_building_id[k];
        const BuildingInfo* info = building(c.building);
        if (!info) {
            throw ArgumentError("facade cell " + std::to_string(k) + " references building " +
                                std::to_string(c.building) + " with no roof cells");
        }
        c.height = info->height;
        c.layout = cell_layout_[k];
        c.cell = k;
        c.perimeter = maps.perimeter_m[k];
        c.s_start = static_cast<double>(maps.u_coord[k]) * c.perimeter;
        chord_index_[k] = static_cast<int>(chords_.size());
        outlines_[c.building].push_back(chord_index_[k]);
        chords_.push_back(c);
    }
    for (auto& [id, list] : outlines_) {
        std::sort(list.begin(), list.end(),
                  [&](int x, int y) { return chords_[x].s_start < chords_[y].s_start; });
    }
}

const std::vector<int>& CityScene::outline(std::uint32_t id) const
{
    static const std::vector<int> kEmpty;
    const auto it = outlines_.find(id);
    return it == outlines_.end() ? kEmpty : it->second;
}

std::uint32_t CityScene::owner_at(Vec2 q) const
{
    const GridSpec& g = grid();
    const auto c = g.locate(q);
    if (!c) {
        return 0;
    }
    const std::size_t k = g.index(*c);
    if (const std::uint32_t b = maps_->building_id[k]; b != 0) {
        return b;
    }
    if (const Chord* ch = chord(k)) {
        if (dot(q - g.centroid(c->i, c->j), ch->normal) - ch->offset <= 0.0) {
            return ch->building;
        }
    }
    return 0;
}

const BuildingInfo* CityScene::building(std::uint32_t id) const
{
    const auto it = buildings_.find(id);
    return it == buildings_.end() ? nullptr : &it->second;
}

const FacadeLayout& CityScene::layout_at(std::size_t idx) const
{
    const int k = cell_layout_[idx];
    if (k < 0) {
        throw ArgumentError("cell " + std::to_string(idx) + " carries no facade composition");
    }
    return layouts_[k];
}

}  // namespace heatmat
