// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Footprint FeatureCollections in local metric coordinates.
#pragma once

#include <string>
#include <vector>

#include "heatmat/city_encoder.hpp"
#include "heatmat/material_db.hpp"

namespace heatmat {

/// Parses a FeatureCollection of Polygon features. Each feature carries
/// properties `id`, `height_m`, `roof_material` and a `facade` object whose
/// keys are the eight slot names (ground_main ... upper_shutters), each
/// `{"material": name, "percentage": n}`. Material names resolve in `db`.
/// Throws ParseError (with line context for syntax errors) and
/// UnknownMaterialError.
std::vector<BuildingFootprint> parse_footprints(const std::string& text, const MaterialDb& db);
std::vector<BuildingFootprint> load_footprints(const std::string& path, const MaterialDb& db);

std::string footprints_to_geojson(const std::vector<BuildingFootprint>& footprints,
                                  const MaterialDb& db);

}  // namespace heatmat
