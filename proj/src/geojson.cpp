// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/geojson.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "heatmat/errors.hpp"

namespace heatmat {

namespace {

using nlohmann::json;

constexpr const char* kSlotKeys[kFacadeSlotCount] = {
    "ground_main", "ground_windows", "ground_frames", "ground_doors",
    "upper_main",  "upper_windows",  "upper_frames",  "upper_shutters",
};

std::string line_context(const std::string& text, std::size_t byte)
{
    byte = std::min(byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n');
    const auto bol = text.rfind('\n', byte == 0 ? 0 : byte - 1);
    const std::size_t col = byte - (bol == std::string::npos ? 0 : bol + 1) + 1;
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

MaterialId resolve_material(const json& v, const MaterialDb& db)
{
    if (v.is_number_integer()) {
        const auto id = v.get<int>();
        if (id == 0) {
            return kNoMaterial;
        }
        if (id < 0 || id > 255) {
            throw UnknownMaterialError("material id " + std::to_string(id) + " out of range");
        }
        return db.by_id(static_cast<MaterialId>(id)).id;
    }
    if (v.is_null()) {
        return kNoMaterial;
    }
    return db.lookup(v.get<std::string>()).id;
}

BuildingFootprint parse_feature(const json& f, const MaterialDb& db, std::size_t index)
{
    const std::string where = "feature " + std::to_string(index);
    const json& geom = f.at("geometry");
    const std::string type = geom.at("type").get<std::string>();
    if (type != "Polygon") {
        throw ParseError(where + ": geometry type '" + type + "' is not supported (Polygon only)");
    }
    const json& rings = geom.at("coordinates");
    if (rings.empty()) {
        throw ParseError(where + ": polygon without rings");
    }
    if (rings.size() > 1) {
        throw ParseError(where + ": polygons with holes (courtyards) are not supported");
    }
    BuildingFootprint fp;
    for (const json& pt : rings.at(0)) {
        if (!pt.is_array() || pt.size() < 2) {
            throw ParseError(where + ": malformed coordinate");
        }
        fp.polygon.push_back({pt[0].get<double>(), pt[1].get<double>()});
    }
    // closed rings repeat the first vertex
    if (fp.polygon.size() > 1 && fp.polygon.front().x == fp.polygon.back().x &&
        fp.polygon.front().y == fp.polygon.back().y) {
        fp.polygon.pop_back();
    }
    const json& props = f.at("properties");
    fp.id = props.at("id").get<std::uint32_t>();
    fp.height = props.at("height_m").get<double>();
    fp.roof_material = resolve_material(props.at("roof_material"), db);
    if (props.contains("facade")) {
        const json& fac = props.at("facade");
        for (int k = 0; k < kFacadeSlotCount; ++k) {
            if (!fac.contains(kSlotKeys[k])) {
                continue;
            }
            const json& slot = fac.at(kSlotKeys[k]);
            SlotValue v;
            if (slot.is_array()) {
                v.material = resolve_material(slot.at(0), db);
                v.percentage = slot.at(1).get<int>();
            } else {
                v.material = resolve_material(slot.at("material"), db);
                v.percentage = slot.at("percentage").get<int>();
            }
            if (v.percentage < 0 || v.percentage > 100) {
                throw ParseError(where + ": facade percentage outside 0..100");
            }
            fp.composition.slots[k] = v;
        }
    } else {
        fp.composition[FacadeSlot::ground_main] = {fp.roof_material, 100};
        fp.composition[FacadeSlot::upper_main] = {fp.roof_material, 100};
    }
    return fp;
}

json material_json(const SlotValue& v, const MaterialDb& db)
{
    json m = v.material == kNoMaterial ? json(nullptr) : json(db.by_id(v.material).name);
    return {{"material", m}, {"percentage", v.percentage}};
}

}  // namespace

std::vector<BuildingFootprint> parse_footprints(const std::string& text, const MaterialDb& db)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("malformed GeoJSON at " + line_context(text, e.byte == 0 ? 0 : e.byte - 1) +
                         ": " + e.what());
    }
    std::vector<BuildingFootprint> out;
    try {
        if (doc.value("type", std::string{}) != "FeatureCollection") {
            throw ParseError("GeoJSON root must be a FeatureCollection");
        }
        std::size_t index = 0;
        for (const json& f : doc.at("features")) {
            out.push_back(parse_feature(f, db, index++));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid GeoJSON feature: ") + e.what());
    }
    return out;
}

std::vector<BuildingFootprint> load_footprints(const std::string& path, const MaterialDb& db)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open GeoJSON '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_footprints(ss.str(), db);
}

std::string footprints_to_geojson(const std::vector<BuildingFootprint>& footprints,
                                  const MaterialDb& db)
{
    json features = json::array();
    for (const BuildingFootprint& fp : footprints) {
        json ring = json::array();
        for (const Vec2& v : fp.polygon) {
            ring.push_back({v.x, v.y});
        }
        if (!fp.polygon.empty()) {
            ring.push_back({fp.polygon.front().x, fp.polygon.front().y});
        }
        json facade;
        for (int k = 0; k < kFacadeSlotCount; ++k) {
            facade[kSlotKeys[k]] = material_json(fp.composition.slots[k], db);
        }
        features.push_back(
            {{"type", "Feature"},
             {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring})}}},
             {"properties",
              {{"id", fp.id},
               {"height_m", fp.height},
               {"roof_material", db.by_id(fp.roof_material).name},
               {"facade", facade}}}});
    }
    const json doc = {{"type", "FeatureCollection"}, {"features", features}};
    return doc.dump(1) + "\n";
}

}  // namespace heatmat
