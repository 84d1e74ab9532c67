// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "fixtures.hpp"
#include "heatmat/city_encoder.hpp"
#include "heatmat/errors.hpp"
#include "heatmat/map_store.hpp"

using namespace heatmat;
using heatmat::test::TempDir;
using heatmat::test::box;

namespace {

MapSet sample_maps()
{
    const GridSpec grid{{-3.0, 7.5}, 0.5, 30, 24};
    const MaterialId c = heatmat::test::id_of("Concrete");
    std::vector<BuildingFootprint> fps{box(1, -1.0, 9.0, 4.0, 14.0, 12.5, c),
                                       box(2, 6.0, 10.0, 10.0, 16.0, 7.0, c)};
    fps[1].composition[FacadeSlot::ground_main].percentage = 70;
    fps[1].composition[FacadeSlot::ground_windows] = {heatmat::test::id_of("Glass"), 30};
    MapSet m = encode_city(fps, grid, heatmat::test::id_of("Asphalt")).maps;
    m.initial_temperature_k[5] = 301.25f;
    m.emissivity_override[7] = 0.5f;
    return m;
}

std::vector<char> slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void spit(const std::string& path, const std::vector<char>& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("grid indexing is row-major with x east and y north")
{
    const GridSpec g{{10.0, 20.0}, 0.5, 4, 3};
    CHECK(g.index(3, 0) == 3);
    CHECK(g.index(0, 1) == 4);
    CHECK(g.centroid(0, 0).x == 10.25);
    CHECK(g.centroid(0, 2).y == 21.25);
    const auto c = g.locate({11.9, 20.6});
    REQUIRE(c);
    CHECK(*c == CellIndex{3, 1});
    CHECK_FALSE(g.locate({12.0, 20.6}));  // half-open
    CHECK_FALSE(g.locate({9.99, 20.6}));
    CHECK_THROWS_AS((GridSpec{{0, 0}, 0.0, 4, 3}.validate()), ArgumentError);
    CHECK_THROWS_AS((GridSpec{{0, 0}, 1.0, 0, 3}.validate()), ArgumentError);
}

TEST_CASE("HM25 round trip is bit-exact")
{
    TempDir dir("mapstore");
    const MapSet m = sample_maps();
    m.validate();
    save(m, dir.file("m.hm25"));
    const MapSet back = load(dir.file("m.hm25"));
    CHECK(back.grid == m.grid);
    CHECK(back.bit_equal(m));

    // Saving the loaded copy reproduces the same bytes.
    save(back, dir.file("again.hm25"));
    CHECK(slurp(dir.file("m.hm25")) == slurp(dir.file("again.hm25")));
}

TEST_CASE("HM25 rejects bad magic, versions and truncation")
{
    TempDir dir("mapstore_bad");
    save(sample_maps(), dir.file("m.hm25"));
    const auto good = slurp(dir.file("m.hm25"));

    auto bad = good;
    bad[0] = 'X';
    spit(dir.file("magic.hm25"), bad);
    CHECK_THROWS_AS(load(dir.file("magic.hm25")), FormatError);

    bad = good;
    bad[4] = 9;
    spit(dir.file("version.hm25"), bad);
    CHECK_THROWS_AS(load(dir.file("version.hm25")), FormatError);

    bad.assign(good.begin(), good.begin() + static_cast<std::ptrdiff_t>(good.size() / 2));
    spit(dir.file("short.hm25"), bad);
    CHECK_THROWS_AS(load(dir.file("short.hm25")), FormatError);

    spit(dir.file("tiny.hm25"), {'H', 'M'});
    CHECK_THROWS_AS(load(dir.file("tiny.hm25")), FormatError);
    CHECK_THROWS_AS(load(dir.file("missing.hm25")), FormatError);
}

TEST_CASE("raster container round trip")
{
    TempDir dir("raster");
    const GridSpec g{{0.0, 0.0}, 2.0, 5, 4};
    Raster r(5, 4);
    for (std::size_t k = 0; k < r.size(); ++k) {
        r.values[k] = 273.15 + 0.1 * static_cast<double>(k);
    }
    r.values[3] = std::numeric_limits<double>::quiet_NaN();
    save_raster(g, r, "temperature_k", dir.file("t.hm25"));
    GridSpec back_grid;
    const Raster back = load_raster(dir.file("t.hm25"), &back_grid);
    CHECK(back_grid == g);
    REQUIRE(back.size() == r.size());
    CHECK(std::memcmp(back.values.data(), r.values.data(), r.size() * sizeof(double)) == 0);
    CHECK_THROWS_AS(save_raster(g, Raster(4, 4), "t", dir.file("x.hm25")), ArgumentError);
    CHECK_THROWS_AS(load_raster(dir.file("nope.hm25")), FormatError);
}

TEST_CASE("validate catches inconsistent layers")
{
    MapSet m = sample_maps();
    m.height_m[0] = 3.0f;  // ground cell with a height
    CHECK_THROWS_AS(m.validate(), FormatError);
    m = sample_maps();
    m.sdf_m.pop_back();
    CHECK_THROWS_AS(m.validate(), FormatError);
}

TEST_CASE("nearest and bilinear lookups")
{
    const GridSpec g{{0.0, 0.0}, 1.0, 3, 2};
    MapSet m = MapSet::blank(g, heatmat::test::id_of("Asphalt"));
    for (int j = 0; j < 2; ++j) {
        for (int i = 0; i < 3; ++i) {
            m.sdf_m[g.index(i, j)] = 10.0 * i + j;
        }
    }
    CHECK(*sample_nearest(g, m.sdf_m, {2.9, 0.1}) == 20.0);
    CHECK_FALSE(sample_nearest(g, m.sdf_m, {3.1, 0.1}));
    // Between centroids (0.5,0.5) and (1.5,1.5): linear in both axes.
    CHECK(*sample_sdf(m, {1.0, 1.0}) == doctest::Approx(5.5));
    CHECK(*sample_sdf(m, {0.5, 0.5}) == doctest::Approx(0.0));
    // Clamped outside the outer centroids.
    CHECK(*sample_sdf(m, {0.1, 0.1}) == doctest::Approx(0.0));
    CHECK(*sample_sdf(m, {2.9, 1.9}) == doctest::Approx(21.0));
    CHECK_FALSE(sample_sdf(m, {-0.1, 1.0}));

    Raster r(3, 2);
    r.values = m.sdf_m;
    CHECK(*sample_bilinear(g, r, {2.0, 0.75}) == doctest::Approx(15.25));
}

TEST_CASE("PGM export maps the window to 0..255, north row first")
{
    TempDir dir("pgm");
    Raster r(2, 2);
    r.at(0, 0) = 290.0;
    r.at(1, 0) = 300.0;
    r.at(0, 1) = 310.0;
    r.at(1, 1) = std::numeric_limits<double>::quiet_NaN();
    write_pgm(r, 290.0, 310.0, dir.file("t.pgm"));
    std::ifstream in(dir.file("t.pgm"));
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "P2\n2 2\n255\n255 0\n0 128\n");
    CHECK_THROWS_AS(write_pgm(r, 1.0, 1.0, dir.file("x.pgm")), ArgumentError);
}

TEST_CASE("layer export by name")
{
    const MapSet m = sample_maps();
    const Raster h = layer_as_raster(m, "height_m");
    for (std::size_t k = 0; k < m.cells(); ++k) {
        CHECK(h.values[k] == static_cast<double>(m.height_m[k]));
    }
    CHECK_THROWS_AS(layer_as_raster(m, "no_such_layer"), ArgumentError);
}
