// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/map_store.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "heatmat/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "HM25 payloads are written in host order and assume little-endian");

namespace heatmat {

namespace {

constexpr char kMagic[4] = {'H', 'M', '2', '5'};
constexpr std::size_t kAlign = 64;

template <class T>
constexpr DType dtype_of();
template <>
constexpr DType dtype_of<std::uint8_t>() { return DType::u8; }
template <>
constexpr DType dtype_of<std::uint16_t>() { return DType::u16; }
template <>
constexpr DType dtype_of<std::uint32_t>() { return DType::u32; }
template <>
constexpr DType dtype_of<float>() { return DType::f32; }
template <>
constexpr DType dtype_of<double>() { return DType::f64; }

std::size_t dtype_size(DType t)
{
    switch (t) {
    case DType::u8: return 1;
    case DType::u16: return 2;
    case DType::u32: return 4;
    case DType::f32: return 4;
    case DType::f64: return 8;
    }
    return 0;
}

const char* dtype_name(DType t)
{
    switch (t) {
    case DType::u8: return "u8";
    case DType::u16: return "u16";
    case DType::u32: return "u32";
    case DType::f32: return "f32";
    case DType::f64: return "f64";
    }
    return "?";
}

DType parse_dtype(const std::string& s)
{
    for (DType t : {DType::u8, DType::u16, DType::u32, DType::f32, DType::f64}) {
        if (s == dtype_name(t)) {
            return t;
        }
    }
    throw FormatError("unknown layer dtype '" + s + "'");
}

// Calls f(name, vector&) for every MapSet layer in file order.
template <class M, class F>
void visit_layers(M& m, F&& f)
{
    f("building_id", m.building_id);
    f("height_m", m.height_m);
    f("roof_material", m.roof_material);
    f("ground_material", m.ground_material);
    f("sdf_m", m.sdf_m);
    f("facade_azimuth_rad", m.facade_azimuth_rad);
    f("u_coord", m.u_coord);
    f("perimeter_m", m.perimeter_m);
    for (int s = 0; s < kFacadeSlotCount; ++s) {
        f(kFacadeSlotNames[s], m.facade_slots[s]);
    }
    f("initial_temperature_k", m.initial_temperature_k);
    f("emissivity_override", m.emissivity_override);
    f("facade_offset_m", m.facade_offset_m);
    f("facade_building_id", m.facade_building_id);
}

template <class T>
NamedLayer to_named(const std::string& name, const std::vector<T>& v)
{
    NamedLayer l;
    l.name = name;
    l.dtype = dtype_of<T>();
    l.bytes.resize(v.size() * sizeof(T));
    if (!v.empty()) {
        std::memcpy(l.bytes.data(), v.data(), l.bytes.size());
    }
    return l;
}

template <class T>
void from_named(const NamedLayer& l, std::size_t cells, std::vector<T>& out)
{
    if (l.dtype != dtype_of<T>()) {
        throw FormatError("layer '" + l.name + "' has dtype " + dtype_name(l.dtype) +
                          ", expected " + dtype_name(dtype_of<T>()));
    }
    if (l.bytes.size() != cells * sizeof(T)) {
        throw FormatError("layer '" + l.name + "' size disagrees with grid dimensions");
    }
    out.resize(cells);
    if (cells != 0) {
        std::memcpy(out.data(), l.bytes.data(), l.bytes.size());
    }
}

nlohmann::json grid_to_json(const GridSpec& g)
{
    return {{"origin_x_m", g.origin.x},
            {"origin_y_m", g.origin.y},
            {"cell_size_m", g.cell_size},
            {"width", g.width},
            {"height", g.height}};
}

GridSpec grid_from_json(const nlohmann::json& j)
{
    GridSpec g;
    g.origin.x = j.at("origin_x_m").get<double>();
    g.origin.y = j.at("origin_y_m").get<double>();
    g.cell_size = j.at("cell_size_m").get<double>();
    g.width = j.at("width").get<int>();
    g.height = j.at("height").get<int>();
    return g;
}

double lerp(double a, double b, double t) { return a == b ? a : a + (b - a) * t; }

template <class Get>
double bilinear_at(const GridSpec& grid, Vec2 p, Get&& get)
{
    // Continuous index relative to centroids, clamped to the outer ring.
    const double fx = std::clamp((p.x - grid.origin.x) / grid.cell_size - 0.5, 0.0,
                                 static_cast<double>(grid.width - 1));
    const double fy = std::clamp((p.y - grid.origin.y) / grid.cell_size - 0.5, 0.0,
                                 static_cast<double>(grid.height - 1));
    const int i0 = std::min(static_cast<int>(fx), grid.width - 1);
    const int j0 = std::min(static_cast<int>(fy), grid.height - 1);
    const int i1 = std::min(i0 + 1, grid.width - 1);
    const int j1 = std::min(j0 + 1, grid.height - 1);
    const double tx = fx - i0;
    const double ty = fy - j0;
    const double a = lerp(get(i0, j0), get(i1, j0), tx);
    const double b = lerp(get(i0, j1), get(i1, j1), tx);
    return lerp(a, b, ty);
}

}  // namespace

bool GridSpec::contains(Vec2 p) const
{
    const Vec2 hi = extent_hi();
    return p.x >= origin.x && p.y >= origin.y && p.x < hi.x && p.y < hi.y;
}

std::optional<CellIndex> GridSpec::locate(Vec2 p) const
{
    if (!contains(p)) {
        return std::nullopt;
    }
    int i = static_cast<int>(std::floor((p.x - origin.x) / cell_size));
    int j = static_cast<int>(std::floor((p.y - origin.y) / cell_size));
    // Guard against rounding at the upper boundary.
    i = std::clamp(i, 0, width - 1);
    j = std::clamp(j, 0, height - 1);
    return CellIndex{i, j};
}

void GridSpec::validate() const
{
    if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
        throw ArgumentError("grid cell size must be positive");
    }
    if (width < 1 || height < 1) {
        throw ArgumentError("grid width and height must be at least 1");
    }
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y)) {
        throw ArgumentError("grid origin must be finite");
    }
}

MapSet MapSet::blank(const GridSpec& grid, MaterialId ground)
{
    grid.validate();
    const std::size_t n = grid.cells();
    const float nan = std::numeric_limits<float>::quiet_NaN();
    MapSet m;
    m.grid = grid;
    m.building_id.assign(n, 0);
    m.height_m.assign(n, 0.0f);
    m.roof_material.assign(n, kNoMaterial);
    m.ground_material.assign(n, ground);
    m.sdf_m.assign(n, std::numeric_limits<double>::infinity());
    m.facade_azimuth_rad.assign(n, nan);
    m.u_coord.assign(n, nan);
    m.perimeter_m.assign(n, 0.0f);
    for (auto& s : m.facade_slots) {
        s.assign(n, 0);
    }
    m.initial_temperature_k.assign(n, nan);
    m.emissivity_override.assign(n, nan);
    m.facade_offset_m.assign(n, nan);
    m.facade_building_id.assign(n, 0);
    return m;
}

void MapSet::validate() const
{
    grid.validate();
    const std::size_t n = grid.cells();
    visit_layers(*this, [&](const char* name, const auto& v) {
        if (v.size() != n) {
            throw FormatError(std::string("layer '") + name + "' size disagrees with grid");
        }
    });
    for (std::size_t k = 0; k < n; ++k) {
        if ((building_id[k] == 0) != (height_m[k] == 0.0f)) {
            throw FormatError("building id and height disagree at cell " + std::to_string(k));
        }
        if (!(height_m[k] >= 0.0f) || !(sdf_m[k] >= 0.0)) {
            throw FormatError("negative height or sdf at cell " + std::to_string(k));
        }
        if (facade_building_id[k] != 0 && !(u_coord[k] >= 0.0f && u_coord[k] < 1.0f)) {
            throw FormatError("u coordinate outside [0, 1) at cell " + std::to_string(k));
        }
    }
}

bool MapSet::bit_equal(const MapSet& other) const
{
    if (!(grid == other.grid)) {
        return false;
    }
    bool same = true;
    auto mine = std::vector<NamedLayer>{};
    visit_layers(*this, [&](const char* name, const auto& v) { mine.push_back(to_named(name, v)); });
    std::size_t k = 0;
    visit_layers(other, [&](const char*, const auto& v) {
        const auto theirs = to_named("", v);
        same = same && theirs.bytes == mine[k].bytes;
        ++k;
    });
    return same;
}

std::optional<double> sample_sdf(const MapSet& maps, Vec2 p)
{
    if (!maps.grid.contains(p)) {
        return std::nullopt;
    }
    return bilinear_at(maps.grid, p,
                       [&](int i, int j) { return maps.sdf_m[maps.grid.index(i, j)]; });
}

std::optional<double> sample_bilinear(const GridSpec& grid, const Raster& r, Vec2 p)
{
    if (!grid.contains(p)) {
        return std::nullopt;
    }
    return bilinear_at(grid, p, [&](int i, int j) { return r.at(i, j); });
}

const NamedLayer* LayerFile::find(const std::string& name) const
{
    for (const NamedLayer& l : layers) {
        if (l.name == name) {
            return &l;
        }
    }
    return nullptr;
}

void write_layer_file(const LayerFile& file, const std::string& path)
{
    file.grid.validate();
    nlohmann::json header;
    header["grid"] = grid_to_json(file.grid);
    header["layers"] = nlohmann::json::array();

    // Offsets are relative to the start of the file; compute them after the
    // header length is known, iterating until the header size is stable.
    std::vector<std::size_t> offsets(file.layers.size(), 0);
    std::string header_text;
    for (int pass = 0; pass < 4; ++pass) {
        nlohmann::json dir = nlohmann::json::array();
        for (std::size_t k = 0; k < file.layers.size(); ++k) {
            const NamedLayer& l = file.layers[k];
            dir.push_back({{"name", l.name},
                           {"dtype", dtype_name(l.dtype)},
                           {"offset", offsets[k]},
                           {"size", l.bytes.size()}});
        }
        header["layers"] = dir;
        header_text = header.dump();
        std::size_t cursor = 4 + 2 + 4 + header_text.size();
        bool changed = false;
        for (std::size_t k = 0; k < file.layers.size(); ++k) {
            cursor = (cursor + kAlign - 1) / kAlign * kAlign;
            if (offsets[k] != cursor) {
                offsets[k] = cursor;
                changed = true;
            }
            cursor += file.layers[k].bytes.size();
        }
        if (!changed) {
            break;
        }
    }

    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    const std::uint16_t version = kHm25Version;
    const auto hlen = static_cast<std::uint32_t>(header_text.size());
    const auto* vb = reinterpret_cast<const std::uint8_t*>(&version);
    const auto* hb = reinterpret_cast<const std::uint8_t*>(&hlen);
    out.insert(out.end(), vb, vb + 2);
    out.insert(out.end(), hb, hb + 4);
    out.insert(out.end(), header_text.begin(), header_text.end());
    for (std::size_t k = 0; k < file.layers.size(); ++k) {
        out.resize(offsets[k], 0);
        out.insert(out.end(), file.layers[k].bytes.begin(), file.layers[k].bytes.end());
    }
    write_file_atomic(path, out);
}

LayerFile read_layer_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open '" + path + "'");
    }
    const std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
    if (data.size() < 10) {
        throw FormatError("'" + path + "' is truncated (no HM25 preamble)");
    }
    if (std::memcmp(data.data(), kMagic, 4) != 0) {
        throw FormatError("'" + path + "' is not an HM25 file (expected magic \"HM25\")");
    }
    std::uint16_t version = 0;
    std::uint32_t hlen = 0;
    std::memcpy(&version, data.data() + 4, 2);
    std::memcpy(&hlen, data.data() + 6, 4);
    if (version != kHm25Version) {
        throw FormatError("unsupported HM25 version " + std::to_string(version) + " (expected " +
                          std::to_string(kHm25Version) + ")");
    }
    if (10 + static_cast<std::size_t>(hlen) > data.size()) {
        throw FormatError("'" + path + "' is truncated inside the header");
    }
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(data.begin() + 10, data.begin() + 10 + hlen);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("corrupt HM25 header: ") + e.what());
    }
    LayerFile file;
    try {
        file.grid = grid_from_json(header.at("grid"));
        file.grid.validate();
        for (const auto& entry : header.at("layers")) {
            NamedLayer l;
            l.name = entry.at("name").get<std::string>();
            l.dtype = parse_dtype(entry.at("dtype").get<std::string>());
            const auto offset = entry.at("offset").get<std::size_t>();
            const auto size = entry.at("size").get<std::size_t>();
            if (offset > data.size() || size > data.size() - offset) {
                throw FormatError("'" + path + "' is truncated inside layer '" + l.name + "'");
            }
            if (size != file.grid.cells() * dtype_size(l.dtype)) {
                throw FormatError("layer '" + l.name + "' size disagrees with grid dimensions");
            }
            l.bytes.assign(data.begin() + static_cast<std::ptrdiff_t>(offset),
                           data.begin() + static_cast<std::ptrdiff_t>(offset + size));
            file.layers.push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed HM25 header: ") + e.what());
    } catch (const ArgumentError& e) {
        throw FormatError(std::string("bad grid in HM25 header: ") + e.what());
    }
    return file;
}

void save(const MapSet& maps, const std::string& path)
{
    maps.validate();
    LayerFile file;
    file.grid = maps.grid;
    visit_layers(maps, [&](const char* name, const auto& v) {
        file.layers.push_back(to_named(name, v));
    });
    write_layer_file(file, path);
}

MapSet load(const std::string& path)
{
    const LayerFile file = read_layer_file(path);
    MapSet m;
    m.grid = file.grid;
    visit_layers(m, [&](const char* name, auto& v) {
        const NamedLayer* l = file.find(name);
        if (!l) {
            throw FormatError(std::string("HM25 map set lacks layer '") + name + "'");
        }
        from_named(*l, file.grid.cells(), v);
    });
    m.validate();
    return m;
}

void save_raster(const GridSpec& grid, const Raster& r, const std::string& layer_name,
                 const std::string& path)
{
    if (r.width != grid.width || r.height != grid.height) {
        throw ArgumentError("raster dimensions disagree with grid");
    }
    LayerFile file;
    file.grid = grid;
    file.layers.push_back(to_named(layer_name, r.values));
    write_layer_file(file, path);
}

Raster load_raster(const std::string& path, GridSpec* grid_out)
{
    const LayerFile file = read_layer_file(path);
    if (file.layers.size() != 1) {
        throw FormatError("'" + path + "' holds " + std::to_string(file.layers.size()) +
                          " layers, expected a single raster");
    }
    Raster r(file.grid.width, file.grid.height);
    from_named(file.layers.front(), file.grid.cells(), r.values);
    if (grid_out) {
        *grid_out = file.grid;
    }
    return r;
}

void write_pgm(const Raster& r, double lo, double hi, const std::string& path)
{
    if (!(hi > lo)) {
        throw ArgumentError("pgm window must satisfy hi > lo");
    }
    std::ostringstream os;
    os << "P2\n" << r.width << ' ' << r.height << "\n255\n";
    for (int j = r.height - 1; j >= 0; --j) {
        for (int i = 0; i < r.width; ++i) {
            const double v = r.at(i, j);
            int g = 0;
            if (std::isfinite(v)) {
                g = static_cast<int>(std::lround(std::clamp((v - lo) / (hi - lo), 0.0, 1.0) * 255));
            }
            os << g << (i + 1 == r.width ? '\n' : ' ');
        }
    }
    write_text_atomic(path, os.str());
}

void write_csv(const Raster& r, const std::string& path)
{
    std::ostringstream os;
    os.precision(17);
    for (int j = r.height - 1; j >= 0; --j) {
        for (int i = 0; i < r.width; ++i) {
            os << r.at(i, j) << (i + 1 == r.width ? '\n' : ',');
        }
    }
    write_text_atomic(path, os.str());
}

Raster layer_as_raster(const MapSet& maps, const std::string& name)
{
    Raster r(maps.grid.width, maps.grid.height);
    bool found = false;
    visit_layers(maps, [&](const char* n, const auto& v) {
        if (name == n) {
            found = true;
            for (std::size_t k = 0; k < v.size(); ++k) {
                r.values[k] = static_cast<double>(v[k]);
            }
        }
    });
    if (!found) {
        throw ArgumentError("unknown layer '" + name + "'");
    }
    return r;
}

void write_file_atomic(const std::string& path, std::span<const std::uint8_t> contents)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + tmp + "'");
        }
        out.write(reinterpret_cast<const char*>(contents.data()),
                  static_cast<std::streamsize>(contents.size()));
        if (!out) {
            throw Error("short write to '" + tmp + "'");
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw Error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

void write_text_atomic(const std::string& path, const std::string& contents)
{
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(contents.data()),
                                      contents.size()));
}

}  // namespace heatmat
