// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// The MapSet: a stack of co-registered top-view rasters describing a city,
// plus the HM25 container used to persist it and any other raster.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "heatmat/geometry.hpp"
#include "heatmat/material_db.hpp"

namespace heatmat {

struct CellIndex {
    int i = 0;  // column, grows east
    int j = 0;  // row, grows north
    bool operator==(const CellIndex&) const = default;
};

struct GridSpec {
    Vec2 origin;  // south-west corner of cell (0, 0)
    double cell_size = 1.0;
    int width = 1;
    int height = 1;

    std::size_t cells() const { return static_cast<std::size_t>(width) * height; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width + i; }
    std::size_t index(CellIndex c) const { return index(c.i, c.j); }
    bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < width && j < height; }
    Vec2 centroid(int i, int j) const
    {
        return {origin.x + (i + 0.5) * cell_size, origin.y + (j + 0.5) * cell_size};
    }
    Vec2 cell_lo(int i, int j) const
    {
        return {origin.x + i * cell_size, origin.y + j * cell_size};
    }
    Vec2 extent_hi() const
    {
        return {origin.x + width * cell_size, origin.y + height * cell_size};
    }
    bool contains(Vec2 p) const;
    /// Cell holding p (half-open cells), or nullopt outside the grid.
    std::optional<CellIndex> locate(Vec2 p) const;
    /// Throws ArgumentError unless cell_size > 0 and both dimensions >= 1.
    void validate() const;
    bool operator==(const GridSpec&) const = default;
};

/// Plain row-major raster of doubles; row j = 0 is the southern edge.
struct Raster {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    Raster() = default;
    Raster(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill)
    {
    }
    double& at(int i, int j) { return values[static_cast<std::size_t>(j) * width + i]; }
    double at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }
    std::size_t size() const { return values.size(); }
};

enum class FacadeSlot : int {
    ground_main = 0,
    ground_windows,
    ground_frames,
    ground_doors,
    upper_main,
    upper_windows,
    upper_frames,
    upper_shutters,
};
inline constexpr int kFacadeSlotCount = 8;

class MapSet {
public:
    GridSpec grid;

    std::vector<std::uint32_t> building_id;
    std::vector<float> height_m;
    std::vector<std::uint8_t> roof_material;
    std::vector<std::uint8_t> ground_material;
    std::vector<double> sdf_m;
    std::vector<float> facade_azimuth_rad;  // NaN off-facade
    std::vector<float> u_coord;             // NaN off-facade
    std::vector<float> perimeter_m;         // 0 off-facade
    std::array<std::vector<std::uint16_t>, kFacadeSlotCount> facade_slots;
    std::vector<float> initial_temperature_k;  // NaN = use the scenario constant
    std::vector<float> emissivity_override;    // NaN = none

    // Signed distance of the cell's facade line from the centroid along the
    // outward normal, and the building that owns it.
    std::vector<float> facade_offset_m;
    std::vector<std::uint32_t> facade_building_id;

    /// All-ground map: every layer sized to the grid, no buildings.
    static MapSet blank(const GridSpec& grid, MaterialId ground);

    std::size_t cells() const { return grid.cells(); }
    bool has_facade(std::size_t idx) const { return facade_building_id[idx] != 0; }

    /// Throws FormatError when a layer size or value range is inconsistent.
    void validate() const;

    bool bit_equal(const MapSet& other) const;
};

inline constexpr std::array<const char*, kFacadeSlotCount> kFacadeSlotNames = {
    "facade_ground_main",  "facade_ground_windows", "facade_ground_frames",
    "facade_ground_doors", "facade_upper_main",     "facade_upper_windows",
    "facade_upper_frames", "facade_upper_shutters",
};

/// Nearest-centroid lookup; nullopt when (x, y) leaves the grid.
template <class T>
std::optional<T> sample_nearest(const GridSpec& grid, const std::vector<T>& layer, Vec2 p)
{
    const auto c = grid.locate(p);
    if (!c) {
        return std::nullopt;
    }
    return layer[grid.index(*c)];
}

/// Bilinear interpolation of the sdf layer between centroids, clamped to the
/// outermost centroids at the border. nullopt outside the grid.
std::optional<double> sample_sdf(const MapSet& maps, Vec2 p);

/// Bilinear sample of a raster placed on `grid`, same conventions as sample_sdf.
std::optional<double> sample_bilinear(const GridSpec& grid, const Raster& r, Vec2 p);

// ---- HM25 container -------------------------------------------------------

enum class DType : std::uint8_t { u8, u16, u32, f32, f64 };

struct NamedLayer {
    std::string name;
    DType dtype = DType::f64;
    std::vector<std::uint8_t> bytes;
};

struct LayerFile {
    GridSpec grid;
    std::vector<NamedLayer> layers;
    const NamedLayer* find(const std::string& name) const;
};

inline constexpr std::uint16_t kHm25Version = 1;

void write_layer_file(const LayerFile& file, const std::string& path);
LayerFile read_layer_file(const std::string& path);

void save(const MapSet& maps, const std::string& path);
MapSet load(const std::string& path);

/// Single-layer temperature raster container.
void save_raster(const GridSpec& grid, const Raster& r, const std::string& layer_name,
                 const std::string& path);
Raster load_raster(const std::string& path, GridSpec* grid_out = nullptr);

// ---- debug exporters ------------------------------------------------------

/// ASCII PGM (P2), north row first; values mapped linearly from [lo, hi] to 0..255.
void write_pgm(const Raster& r, double lo, double hi, const std::string& path);
void write_csv(const Raster& r, const std::string& path);

/// Named MapSet layer widened to doubles, for the exporters.
Raster layer_as_raster(const MapSet& maps, const std::string& name);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomic(const std::string& path, std::span<const std::uint8_t> contents);
void write_text_atomic(const std::string& path, const std::string& contents);

}  // namespace heatmat
