// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Small scenes shared by the unit tests.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "heatmat/city_encoder.hpp"
#include "heatmat/material_db.hpp"

namespace heatmat::test {

inline FacadeComposition plain(MaterialId m)
{
    FacadeComposition c;
    c[FacadeSlot::ground_main] = {m, 100};
    c[FacadeSlot::upper_main] = {m, 100};
    return c;
}

inline BuildingFootprint box(std::uint32_t id, double x0, double y0, double x1, double y1,
                             double height, MaterialId m)
{
    BuildingFootprint fp;
    fp.id = id;
    fp.polygon = {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
    fp.height = height;
    fp.roof_material = m;
    fp.composition = plain(m);
    return fp;
}

inline MaterialId id_of(const char* name)
{
    return MaterialDb::builtin().lookup(name).id;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
    {
        path_ = std::filesystem::temp_directory_path() /
                ("heatmat_" + tag + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace heatmat::test
