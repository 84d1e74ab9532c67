// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "heatmat/city_encoder.hpp"
#include "heatmat/errors.hpp"
#include "heatmat/geojson.hpp"
#include "heatmat/scenes.hpp"

namespace heatmat {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

struct Entry {
    std::string value;
    int line = 0;
};

// Strips a trailing comment that is not inside quotes, then unquotes.
std::string parse_value(const std::string& raw, int line)
{
    std::string v;
    bool quoted = false;
    for (char ch : raw) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == '#' && !quoted) {
            break;
        }
        v += ch;
    }
    if (quoted) {
        throw ConfigError("line " + std::to_string(line) + ": unterminated string");
    }
    v = trim(v);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        v = v.substr(1, v.size() - 2);
    }
    return v;
}

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used == v.size() && std::isfinite(d)) {
            return d;
        }
    } catch (const std::logic_error&) {
    }
    throw ConfigError(key + ": expected a number, got '" + v + "'");
}

long long to_int(const std::string& key, const std::string& v)
{
    try {
        std::size_t used = 0;
        const long long d = std::stoll(v, &used);
        if (used == v.size()) {
            return d;
        }
    } catch (const std::logic_error&) {
    }
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

}  // namespace

std::string Scenario::resolve(const std::string& path) const
{
    if (path.empty()) {
        return path;
    }
    const std::filesystem::path p(path);
    return p.is_absolute() ? path : (std::filesystem::path(base_dir) / p).string();
}

std::vector<LocalDateTime> parse_chain(const std::string& text, const SimulationConfig& c,
                                       double utc_offset_h)
{
    std::vector<LocalDateTime> out;
    std::vector<std::string> errors;
    for (const auto& item : split(text, ',')) {
        try {
            if (item.find('-') != std::string::npos) {
                out.push_back(LocalDateTime::parse(item, utc_offset_h));
            } else {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%04d-%02d-%02d ", c.time.year, c.time.month, c.time.day);
                out.push_back(LocalDateTime::parse(buf + item, utc_offset_h));
            }
        } catch (const Error& e) {
            errors.push_back(std::string("chain: ") + e.what());
        }
    }
    if (!c.air_temperature.empty() && !c.air_temperature.is_constant()) {
        for (const auto& t : out) {
            const double sod = t.seconds_of_day();
            if (sod < c.air_temperature.first_time() || sod > c.air_temperature.last_time()) {
                errors.push_back("chain time " + t.to_string() + " lies outside the air temperature schedule");
            }
        }
    }
    if (!errors.empty()) {
        std::string msg = errors.front();
        for (std::size_t k = 1; k < errors.size(); ++k) {
            msg += "\n  " + errors[k];
        }
        throw ConfigError(msg);
    }
    return out;
}

Scenario parse_scenario(const std::string& text, const std::string& base_dir)
{
    std::map<std::string, Entry> kv;
    std::vector<std::string> errors;
    {
        std::istringstream in(text);
        std::string line;
        int n = 0;
        while (std::getline(in, line)) {
            ++n;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#' || (t.front() == '[' && t.back() == ']')) {
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) {
                errors.push_back("line " + std::to_string(n) + ": expected key = value");
                continue;
            }
            const std::string key = trim(t.substr(0, eq));
            try {
                if (!kv.emplace(key, Entry{parse_value(t.substr(eq + 1), n), n}).second) {
                    errors.push_back("line " + std::to_string(n) + ": duplicate key '" + key + "'");
                }
            } catch (const ConfigError& e) {
                errors.push_back(e.what());
            }
        }
    }

    Scenario s;
    s.base_dir = base_dir;
    if (const auto it = kv.find("scene"); it != kv.end()) {
        s.scene = it->second.value;
        try {
            s.config = builtin_scene(s.scene).config;
            s.utc_offset_h = s.config.time.utc_offset_h;
        } catch (const Error& e) {
            errors.push_back(std::string("scene: ") + e.what());
        }
        kv.erase(it);
    }
    // The offset must be known before any datetime is parsed.
    if (const auto it = kv.find("utc_offset_h"); it != kv.end()) {
        try {
            s.utc_offset_h = to_double("utc_offset_h", it->second.value);
            s.config.time.utc_offset_h = s.utc_offset_h;
        } catch (const ConfigError& e) {
            errors.push_back(e.what());
        }
        kv.erase(it);
    }

    SimulationConfig& c = s.config;
    GridSpec grid;
    bool grid_set = false;
    std::string chain_text;
    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> handlers = {
        {"maps", [&](auto&, auto& v) { s.maps_path = v; }},
        {"geojson", [&](auto&, auto& v) { s.geojson_path = v; }},
        {"materials_csv", [&](auto&, auto& v) { s.materials_csv = v; }},
        {"origin_x_m", [&](auto& k, auto& v) { grid.origin.x = to_double(k, v); grid_set = true; }},
        {"origin_y_m", [&](auto& k, auto& v) { grid.origin.y = to_double(k, v); grid_set = true; }},
        {"cell_size_m", [&](auto& k, auto& v) { grid.cell_size = to_double(k, v); grid_set = true; }},
        {"width_cells", [&](auto& k, auto& v) { grid.width = static_cast<int>(to_int(k, v)); grid_set = true; }},
        {"height_cells", [&](auto& k, auto& v) { grid.height = static_cast<int>(to_int(k, v)); grid_set = true; }},
        {"ground_material", [&](auto&, auto& v) { s.ground_material = v; }},
        {"spp", [&](auto& k, auto& v) { c.spp = static_cast<int>(to_int(k, v)); }},
        {"seed", [&](auto& k, auto& v) { c.seed = static_cast<std::uint64_t>(to_int(k, v)); }},
        {"threads", [&](auto& k, auto& v) { c.threads = static_cast<int>(to_int(k, v)); }},
        {"max_radiative_bounces", [&](auto& k, auto& v) { c.max_radiative_bounces = static_cast<int>(to_int(k, v)); }},
        {"conductive_steps_per_chain", [&](auto& k, auto& v) { c.conductive_steps_per_chain = static_cast<int>(to_int(k, v)); }},
        {"max_transitions", [&](auto& k, auto& v) { c.max_transitions = static_cast<int>(to_int(k, v)); }},
        {"trace_max_steps", [&](auto& k, auto& v) { c.trace_max_steps = static_cast<int>(to_int(k, v)); }},
        {"delta_m", [&](auto& k, auto& v) { c.delta = to_double(k, v); }},
        {"facade_pattern_width_m", [&](auto& k, auto& v) { c.pattern.width = to_double(k, v); }},
        {"facade_pattern_height_m", [&](auto& k, auto& v) { c.pattern.height = to_double(k, v); }},
        {"facade_max_door_width_m", [&](auto& k, auto& v) { c.pattern.max_door_width = to_double(k, v); }},
        {"air_temperature_k", [&](auto&, auto& v) { c.air_temperature = Schedule::parse(v); }},
        {"sky_temperature_k", [&](auto&, auto& v) { c.sky_temperature = Schedule::parse(v); }},
        {"initial_temperature_k", [&](auto& k, auto& v) { c.initial_temperature = to_double(k, v); }},
        {"lookback_s", [&](auto& k, auto& v) { c.lookback = to_double(k, v); }},
        {"t_ref_k", [&](auto& k, auto& v) { c.t_ref = to_double(k, v); }},
        {"h_conv_w_m2k", [&](auto& k, auto& v) { c.h_conv = to_double(k, v); }},
        {"sun", [&](auto& k, auto& v) { c.sun_enabled = to_bool(k, v); }},
        {"latitude_deg", [&](auto& k, auto& v) { c.latitude_deg = to_double(k, v); }},
        {"longitude_deg", [&](auto& k, auto& v) { c.longitude_deg = to_double(k, v); }},
        {"datetime", [&](auto&, auto& v) { c.time = LocalDateTime::parse(v, s.utc_offset_h); }},
        {"diffuse_fraction", [&](auto& k, auto& v) { c.diffuse_fraction = to_double(k, v); }},
        {"sun_half_angle_deg", [&](auto& k, auto& v) { c.sun_half_angle_deg = to_double(k, v); }},
        {"solar_constant_w_m2", [&](auto& k, auto& v) { c.solar_constant = to_double(k, v); }},
        {"dirichlet_k",
         [&](auto& k, auto& v) {
             for (const auto& item : split(v, ',')) {
                 const auto eq = item.find('=');
                 if (eq == std::string::npos) {
                     throw ConfigError(k + ": entry '" + item + "' lacks '='");
                 }
                 s.dirichlet[trim(item.substr(0, eq))] = to_double(k, trim(item.substr(eq + 1)));
             }
         }},
        {"output_dir", [&](auto&, auto& v) { s.output_dir = v; }},
        {"pgm_min_k", [&](auto& k, auto& v) { s.pgm_min_k = to_double(k, v); }},
        {"pgm_max_k", [&](auto& k, auto& v) { s.pgm_max_k = to_double(k, v); }},
        {"profile_m",
         [&](auto& k, auto& v) {
             const auto parts = split(v, ',');
             if (parts.size() != 4) {
                 throw ConfigError(k + ": expected x0,y0,x1,y1");
             }
             s.profile = std::array<Vec2, 2>{Vec2{to_double(k, parts[0]), to_double(k, parts[1])},
                                             Vec2{to_double(k, parts[2]), to_double(k, parts[3])}};
         }},
        {"profile_samples", [&](auto& k, auto& v) { s.profile_samples = static_cast<int>(to_int(k, v)); }},
        {"facade_main", [&](auto&, auto& v) { s.facade_main = v; }},
        {"facade_main_by_building",
         [&](auto& k, auto& v) {
             for (const auto& item : split(v, ',')) {
                 const auto eq = item.find('=');
                 if (eq == std::string::npos) {
                     throw ConfigError(k + ": entry '" + item + "' lacks '='");
                 }
                 s.facade_main_by_building.emplace_back(
                     static_cast<std::uint32_t>(to_int(k, trim(item.substr(0, eq)))),
                     trim(item.substr(eq + 1)));
             }
         }},
        {"chain", [&](auto&, auto& v) { chain_text = v; }},
        {"diff_a", [&](auto&, auto& v) { s.diff_a = v; }},
        {"diff_b", [&](auto&, auto& v) { s.diff_b = v; }},
    };

    // datetime first so that chain entries can borrow its date.
    std::vector<std::pair<std::string, Entry>> ordered(kv.begin(), kv.end());
    std::stable_partition(ordered.begin(), ordered.end(),
                          [](const auto& e) { return e.first == "datetime"; });
    for (const auto& [key, entry] : ordered) {
        const auto h = handlers.find(key);
        if (h == handlers.end()) {
            errors.push_back("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");
            continue;
        }
        try {
            h->second(key, entry.value);
        } catch (const Error& e) {
            errors.push_back("line " + std::to_string(entry.line) + ": " + e.what());
        }
    }

    if (grid_set) {
        try {
            grid.validate();
            s.grid = grid;
        } catch (const Error& e) {
            errors.push_back(std::string("grid: ") + e.what());
        }
    }
    try {
        s.chain = parse_chain(chain_text, c, s.utc_offset_h);
    } catch (const ConfigError& e) {
        errors.push_back(e.what());
    }
    const int sources = !s.scene.empty() + !s.maps_path.empty() + !s.geojson_path.empty();
    if (sources != 1) {
        errors.push_back("exactly one of scene, maps or geojson must be set");
    }
    if (!s.geojson_path.empty() && !s.grid) {
        errors.push_back("geojson input needs origin_x_m, origin_y_m, cell_size_m, width_cells, height_cells");
    }
    if (!(s.pgm_max_k > s.pgm_min_k)) {
        errors.push_back("pgm_max_k must exceed pgm_min_k");
    }
    if (s.profile_samples < 2) {
        errors.push_back("profile_samples must be >= 2");
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        errors.push_back(e.what());
    }
    if (!errors.empty()) {
        std::string msg = "scenario has " + std::to_string(errors.size()) + " error(s):";
        for (const auto& e : errors) {
            msg += "\n  " + e;
        }
        throw ConfigError(msg);
    }
    return s;
}

Scenario load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open scenario '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const auto dir = std::filesystem::path(path).parent_path();
    return parse_scenario(ss.str(), dir.empty() ? "." : dir.string());
}

std::size_t apply_facade_main(MapSet& maps, MaterialId material, std::uint32_t building)
{
    std::size_t touched = 0;
    const int slots[] = {static_cast<int>(FacadeSlot::ground_main),
                         static_cast<int>(FacadeSlot::upper_main)};
    for (std::size_t k = 0; k < maps.cells(); ++k) {
        const std::uint32_t owner =
            maps.building_id[k] != 0 ? maps.building_id[k] : maps.facade_building_id[k];
        if (owner == 0 || (building != 0 && owner != building)) {
            continue;
        }
        bool any = false;
        for (int s : slots) {
            SlotValue v = unpack_slot(maps.facade_slots[s][k]);
            if (v.percentage == 0) {
                continue;
            }
            v.material = material;
            maps.facade_slots[s][k] = pack_slot(v);
            any = true;
        }
        touched += any;
    }
    return touched;
}

LoadedScene load_scene(Scenario& s)
{
    LoadedScene out;
    if (!s.scene.empty()) {
        SceneBundle b = builtin_scene(s.scene);
        out.db = b.db;
        out.maps = b.encode().maps;
    } else {
        out.db = s.materials_csv.empty() ? MaterialDb::builtin()
                                         : MaterialDb::from_csv_file(s.resolve(s.materials_csv));
        if (!s.maps_path.empty()) {
            out.maps = load(s.resolve(s.maps_path));
        } else {
            const auto fps = load_footprints(s.resolve(s.geojson_path), out.db);
            if (fps.empty()) {
                out.warnings.push_back("no footprints: the map is all ground");
            }
            EncodeResult r = encode_city(fps, *s.grid, out.db.lookup(s.ground_material).id);
            for (const auto& [id, why] : r.report.rejected) {
                out.warnings.push_back("building " + std::to_string(id) + " rejected: " + why);
            }
            if (r.report.clipped_footprints > 0) {
                out.warnings.push_back(std::to_string(r.report.clipped_footprints) +
                                       " footprint(s) clipped to the grid");
            }
            out.maps = std::move(r.maps);
        }
    }
    if (!s.facade_main.empty()) {
        apply_facade_main(out.maps, out.db.lookup(s.facade_main).id);
    }
    for (const auto& [b, name] : s.facade_main_by_building) {
        if (apply_facade_main(out.maps, out.db.lookup(name).id, b) == 0) {
            out.warnings.push_back("facade override: building " + std::to_string(b) +
                                   " has no facade cells");
        }
    }
    s.config.dirichlet.clear();
    for (const auto& [name, temp] : s.dirichlet) {
        s.config.dirichlet[out.db.lookup(name).id] = temp;
    }
    return out;
}

}  // namespace heatmat
