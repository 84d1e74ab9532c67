// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <fstream>
#include <string>

#include "fixtures.hpp"
#include "heatmat/errors.hpp"
#include "heatmat/geojson.hpp"
#include "heatmat/scenario.hpp"
#include "heatmat/scenes.hpp"

using namespace heatmat;

TEST_CASE("scenario keys map onto the configuration")
{
    const Scenario s = parse_scenario(R"(# comment line
scene = "district"   # trailing comment
spp = 250
seed = 42
threads = 2
utc_offset_h = -4
datetime = "2024-06-06 14:00"
latitude_deg = 42.33
longitude_deg = -83.05
air_temperature_k = "06:00=295,14:00=308,22:00=300"
sky_temperature_k = 285
initial_temperature_k = 301
sun = on
diffuse_fraction = 0.2
lookback_s = 7200
facade_main = "Limestone"
facade_main_by_building = "3=Glass, 5=Brick"
profile_m = "1,2,30,2"
profile_samples = 31
pgm_min_k = 280
pgm_max_k = 330
chain = "07:00,2024-06-06 08:30"
output_dir = "out/x"
)",
                                      "/base");
    CHECK(s.scene == "district");
    CHECK(s.config.spp == 250);
    CHECK(s.config.seed == 42);
    CHECK(s.config.threads == 2);
    CHECK(s.utc_offset_h == -4.0);
    CHECK(s.config.time.hour == 14);
    CHECK(s.config.time.utc_offset_h == -4.0);
    CHECK(s.config.air_temperature.at(10 * 3600.0) == doctest::Approx(301.5));
    CHECK(s.config.sky_temperature.at(0.0) == 285.0);
    CHECK(s.config.initial_temperature == 301.0);
    CHECK(s.config.sun_enabled);
    CHECK(s.config.diffuse_fraction == 0.2);
    CHECK(s.config.lookback == 7200.0);
    CHECK(s.facade_main == "Limestone");
    REQUIRE(s.facade_main_by_building.size() == 2);
    CHECK(s.facade_main_by_building[1].first == 5);
    CHECK(s.facade_main_by_building[1].second == "Brick");
    REQUIRE(s.profile);
    CHECK((*s.profile)[1].x == 30.0);
    CHECK(s.profile_samples == 31);
    REQUIRE(s.chain.size() == 2);
    CHECK(s.chain[0].day == 6);
    CHECK(s.chain[0].hour == 7);
    CHECK(s.chain[1].minute == 30);
    CHECK(s.resolve("out/x") == "/base/out/x");
    CHECK(s.resolve("/abs") == "/abs");
}

TEST_CASE("every error is reported at once")
{
    try {
        parse_scenario("scene = \"district\"\nspp = many\ncolour = red\npgm_min_k = 300\npgm_max_k = 290\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("spp") != std::string::npos);
        CHECK(msg.find("colour") != std::string::npos);
        CHECK(msg.find("pgm_max_k") != std::string::npos);
        CHECK(msg.find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scenario("spp = 5\n"), ConfigError);                            // no geometry
    CHECK_THROWS_AS(parse_scenario("scene = \"canyon\"\nmaps = \"x.hm25\"\n"), ConfigError);  // two sources
    CHECK_THROWS_AS(parse_scenario("geojson = \"a.geojson\"\n"), ConfigError);              // no grid
    CHECK_THROWS_AS(parse_scenario("scene = \"canyon\"\noutput_dir = \"unterminated\n"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/x.toml"), ConfigError);
}

TEST_CASE("chain entries must fall inside the air schedule")
{
    SimulationConfig c;
    c.time = LocalDateTime::parse("2024-06-06 06:00", 0.0);
    c.air_temperature = Schedule::parse("06:00=295,22:00=294");
    const auto ok = parse_chain("06:00, 12:00,22:00", c, 0.0);
    CHECK(ok.size() == 3);
    CHECK_THROWS_AS(parse_chain("05:00,12:00", c, 0.0), ConfigError);
    CHECK_THROWS_AS(parse_chain("noon", c, 0.0), ConfigError);
    c.air_temperature = Schedule(300.0);
    CHECK(parse_chain("02:00", c, 0.0).size() == 1);
}

TEST_CASE("shipped scenarios parse")
{
    const std::string dir = HEATMAT_DATA_DIR "/scenarios/";
    for (const char* name : {"canyon.toml", "canyon_sun.toml", "district.toml", "district_whatif.toml",
                             "district_day.toml", "uniform.toml"}) {
        CAPTURE(name);
        CHECK_NOTHROW(load_scenario(dir + name));
    }
    const Scenario day = load_scenario(dir + "district_day.toml");
    CHECK(day.chain.size() == 17);
    const Scenario w = load_scenario(dir + "district_whatif.toml");
    CHECK(w.diff_a == "Concrete");
    CHECK(w.diff_b == "Limestone");
}

TEST_CASE("load_scene applies facade overrides and Dirichlet names")
{
    Scenario s = parse_scenario("scene = \"district\"\nfacade_main = \"Limestone\"\ndirichlet_k = \"Glass=310\"\n");
    const LoadedScene ls = load_scene(s);
    const MaterialId lime = ls.db.lookup("Limestone").id;
    bool any = false;
    for (std::size_t k = 0; k < ls.maps.cells(); ++k) {
        if (ls.maps.has_facade(k)) {
            const SlotValue v = unpack_slot(ls.maps.facade_slots[static_cast<int>(FacadeSlot::ground_main)][k]);
            CHECK(v.material == lime);
            any = true;
        }
    }
    CHECK(any);
    REQUIRE(s.config.dirichlet.size() == 1);
    CHECK(s.config.dirichlet.begin()->second == 310.0);

    Scenario bad = parse_scenario("scene = \"district\"\nfacade_main = \"Unobtainium\"\n");
    CHECK_THROWS_AS(load_scene(bad), UnknownMaterialError);
}

TEST_CASE("geojson scenario encodes the shipped canyon footprints")
{
    const Scenario s = load_scenario(HEATMAT_DATA_DIR "/scenarios/canyon_sun.toml");
    Scenario copy = s;
    const LoadedScene ls = load_scene(copy);
    const SceneBundle b = canyon_scene();
    const MapSet ref = b.encode().maps;
    CHECK(ls.maps.grid == ref.grid);
    CHECK(ls.maps.building_id == ref.building_id);
    CHECK(ls.maps.sdf_m == ref.sdf_m);
}

TEST_CASE("footprint GeoJSON round trip")
{
    const SceneBundle b = district_scene();
    const std::string text = footprints_to_geojson(b.footprints, b.db);
    const auto back = parse_footprints(text, b.db);
    REQUIRE(back.size() == b.footprints.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
        CHECK(back[k].id == b.footprints[k].id);
        CHECK(back[k].height == b.footprints[k].height);
        CHECK(back[k].composition == b.footprints[k].composition);
        CHECK(back[k].polygon.size() == b.footprints[k].polygon.size());
    }
    CHECK_THROWS_AS(parse_footprints("{\"type\": \"FeatureCollection\", \"features\": [", b.db), ParseError);
    CHECK_THROWS_AS(parse_footprints(R"({"type":"FeatureCollection","features":[{"type":"Feature",
        "geometry":{"type":"Polygon","coordinates":[[[0,0],[5,0],[5,5],[0,5]]]},
        "properties":{"id":1,"height_m":5,"roof_material":"Kryptonite"}}]})", b.db),
                    UnknownMaterialError);
}
