// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Built-in test scenes.
#pragma once

#include <string>
#include <vector>

#include "heatmat/city_encoder.hpp"
#include "heatmat/material_db.hpp"
#include "heatmat/transport.hpp"

namespace heatmat {

struct SceneBundle {
    std::string name;
    MaterialDb db;
    std::vector<BuildingFootprint> footprints;
    GridSpec grid;
    MaterialId ground_material = kNoMaterial;
    SimulationConfig config;

    EncodeResult encode() const { return encode_city(footprints, grid, ground_material); }
};

/// Wall / Glazing / Ground table of the canyon comparison scene.
const char* canyon_materials_csv();

/// Two rows of four 20 x 15 x 13.7 m blocks on a 320 x 210 grid at 0.5 m.
/// Air 300 K, sky 280 K, initial 273 K, no sun.
SceneBundle canyon_scene();

/// Mixed-height district on a 245 x 181 grid at 0.5 m (42.33 N, 83.05 W,
/// UTC-4, 2024-06-06 14:00, air 308 K). Roofs concrete, ground asphalt;
/// `facade_main` is the main facade material on both levels.
SceneBundle district_scene(const std::string& facade_main = "Concrete");

/// Scene by name: "canyon" or "district". Throws ArgumentError otherwise.
SceneBundle builtin_scene(const std::string& name);

}  // namespace heatmat
