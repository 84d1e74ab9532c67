// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Scenario files: flat `key = value` documents with units in the key names.
//
//   scene = "district"
//   spp = 1000
//   air_temperature_k = "06:00=295,14:00=308,22:00=300"
//   facade_main = "Limestone"
#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heatmat/map_store.hpp"
#include "heatmat/material_db.hpp"
#include "heatmat/solar_model.hpp"
#include "heatmat/transport.hpp"

namespace heatmat {

struct Scenario {
    std::string base_dir;  // relative paths resolve against this

    // Geometry source: a built-in scene, an encoded map file, or footprints.
    std::string scene;
    std::string maps_path;
    std::string geojson_path;
    std::string materials_csv;
    std::optional<GridSpec> grid;
    std::string ground_material = "Asphalt";

    SimulationConfig config;
    double utc_offset_h = 0.0;

    std::string output_dir = "out";
    double pgm_min_k = 290.0;
    double pgm_max_k = 338.0;
    std::optional<std::array<Vec2, 2>> profile;
    int profile_samples = 200;

    // Facade main-material substitutions, percentages kept.
    std::string facade_main;
    std::vector<std::pair<std::uint32_t, std::string>> facade_main_by_building;
    std::map<std::string, double> dirichlet;  // material name -> K

    std::vector<LocalDateTime> chain;
    std::string diff_a;
    std::string diff_b;

    std::string resolve(const std::string& path) const;
};

/// "06:00,07:00" (date borrowed from c.time) or full datetimes. Throws
/// ConfigError when an entry is malformed or outside a non-constant air schedule.
std::vector<LocalDateTime> parse_chain(const std::string& text, const SimulationConfig& c,
                                       double utc_offset_h);

/// Throws ConfigError listing every unknown key and bad value.
Scenario parse_scenario(const std::string& text, const std::string& base_dir = ".");
Scenario load_scenario(const std::string& path);

struct LoadedScene {
    MaterialDb db;
    MapSet maps;
    std::vector<std::string> warnings;
};

/// Builds the database and MapSet, then applies facade overrides and
/// resolves Dirichlet materials into scenario.config.
LoadedScene load_scene(Scenario& scenario);

/// Replaces the main facade material on both levels, keeping percentages.
/// building == 0 applies to every building. Returns the number of cells touched.
std::size_t apply_facade_main(MapSet& maps, MaterialId material, std::uint32_t building = 0);

}  // namespace heatmat
