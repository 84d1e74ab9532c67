// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/scenes.hpp"

#include <cmath>
#include <sstream>

#include "heatmat/errors.hpp"

namespace heatmat {

namespace {

std::vector<Vec2> rect(double x0, double y0, double x1, double y1)
{
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

std::vector<Vec2> rotated_rect(Vec2 c, double w, double h, double deg)
{
    const double a = deg * kPi / 180.0;
    const double ca = std::cos(a);
    const double sa = std::sin(a);
    std::vector<Vec2> out;
    for (const Vec2 p : {Vec2{-w / 2, -h / 2}, Vec2{w / 2, -h / 2}, Vec2{w / 2, h / 2},
                         Vec2{-w / 2, h / 2}}) {
        out.push_back({c.x + p.x * ca - p.y * sa, c.y + p.x * sa + p.y * ca});
    }
    return out;
}

FacadeComposition two_material(MaterialId main, MaterialId window, int window_pct)
{
    FacadeComposition c;
    c[FacadeSlot::ground_main] = {main, 100 - window_pct};
    c[FacadeSlot::ground_windows] = {window, window_pct};
    c[FacadeSlot::upper_main] = {main, 100 - window_pct};
    c[FacadeSlot::upper_windows] = {window, window_pct};
    return c;
}

}  // namespace

const char* canyon_materials_csv()
{
    return "name,heat_capacity,conductivity,density,emissivity,reflectance\n"
           "Wall,2000,1.5,2500,0.9,lambertian\n"
           "Glazing,2000,0.9,2500,0.9,lambertian\n"
           "Ground,2000,1,2500,0.9,lambertian\n";
}

SceneBundle canyon_scene()
{
    SceneBundle s;
    s.name = "canyon";
    std::istringstream csv(canyon_materials_csv());
    s.db = MaterialDb::from_csv(csv);
    const MaterialId wall = s.db.lookup("Wall").id;
    const MaterialId glazing = s.db.lookup("Glazing").id;
    s.ground_material = s.db.lookup("Ground").id;
    s.grid = GridSpec{{0.0, 0.0}, 0.5, 320, 210};

    // Rows of four, 10 m apart along a row and 35 m between rows.
    std::uint32_t id = 1;
    for (double y0 : {20.0, 70.0}) {
        for (int k = 0; k < 4; ++k) {
            const double x0 = 25.0 + k * 30.0;
            BuildingFootprint fp;
            fp.id = id++;
            fp.polygon = rect(x0, y0, x0 + 20.0, y0 + 15.0);
            fp.height = 13.7;
            fp.roof_material = wall;
            fp.composition = two_material(wall, glazing, 6);
            s.footprints.push_back(std::move(fp));
        }
    }

    SimulationConfig& c = s.config;
    c.air_temperature = Schedule(300.0);
    c.sky_temperature = Schedule(280.0);
    c.initial_temperature = 273.0;
    c.sun_enabled = false;
    c.time = LocalDateTime::parse("2024-06-06 12:00", 0.0);
    return s;
}

SceneBundle district_scene(const std::string& facade_main)
{
    SceneBundle s;
    s.name = "district";
    s.db = MaterialDb::builtin();
    const MaterialId concrete = s.db.lookup("Concrete").id;
    const MaterialId glass = s.db.lookup("Glass").id;
    const MaterialId main = s.db.lookup(facade_main).id;
    s.ground_material = s.db.lookup("Asphalt").id;
    s.grid = GridSpec{{0.0, 0.0}, 0.5, 245, 181};

    struct Block {
        std::vector<Vec2> ring;
        double height;
    };
    const std::vector<Block> blocks = {
        {rect(5, 5, 30, 25), 12},
        {rect(38, 5, 60, 20), 20},
        {{{68, 5}, {100, 5}, {100, 15}, {80, 15}, {80, 35}, {68, 35}}, 9},
        {rect(106, 8, 118, 40), 32},
        {rotated_rect({20, 50}, 24, 14, 20), 15},
        {rect(40, 35, 58, 60), 28},
        {rect(65, 45, 95, 60), 7},
        {rect(100, 50, 118, 75), 18},
        {rect(5, 70, 25, 86), 10},
        {rotated_rect({45, 76}, 20, 12, -10), 24},
        {rect(65, 68, 90, 86), 14},
    };
    std::uint32_t id = 1;
    for (const Block& b : blocks) {
        BuildingFootprint fp;
        fp.id = id++;
        fp.polygon = b.ring;
        fp.height = b.height;
        fp.roof_material = concrete;
        fp.composition = two_material(main, glass, 20);
        s.footprints.push_back(std::move(fp));
    }

    SimulationConfig& c = s.config;
    c.air_temperature = Schedule(308.0);
    c.sky_temperature = Schedule(290.0);
    c.initial_temperature = 308.0;
    c.sun_enabled = true;
    c.latitude_deg = 42.33;
    c.longitude_deg = -83.05;
    c.time = LocalDateTime::parse("2024-06-06 14:00", -4.0);
    return s;
}

SceneBundle builtin_scene(const std::string& name)
{
    if (name == "canyon") {
        return canyon_scene();
    }
    if (name == "district") {
        return district_scene();
    }
    throw ArgumentError("unknown built-in scene '" + name + "' (expected canyon or district)");
}

}  // namespace heatmat
