// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// Thermal/optical material properties and the per-interface heat transfer
// coefficients that drive mode selection in the path kernel.
#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heatmat {

inline constexpr double kStefanBoltzmann = 5.670374419e-8;  // W/(m^2 K^4)

enum class ReflectanceKind : std::uint8_t { lambertian, specular };

using MaterialId = std::uint8_t;

/// Id 0 is reserved for "no material".
inline constexpr MaterialId kNoMaterial = 0;

struct Material {
    MaterialId id = kNoMaterial;
    std::string name;
    double heat_capacity = 0.0;  // J/(K kg)
    double conductivity = 0.0;   // W/(m K)
    double density = 0.0;        // kg/m^3
    double emissivity = 0.0;     // [0, 1]
    ReflectanceKind reflectance = ReflectanceKind::lambertian;
};

struct TransferCoefficients {
    double h_rad = 0.0;
    double h_conv = 0.0;
    double h_cond = 0.0;
    double h_total = 0.0;
};

struct ModeProbabilities {
    double radiative = 0.0;
    double convective = 0.0;
    double conductive = 0.0;
};

/// Immutable after construction; safe to share between threads.
class MaterialDb {
public:
    MaterialDb() = default;

    /// Builds a database from rows; ids are assigned 1..n in row order.
    explicit MaterialDb(std::vector<Material> rows);

    /// The twelve-material urban database shipped with the simulator.
    static const MaterialDb& builtin();

    /// Reads `name,heat_capacity,conductivity,density,emissivity,reflectance`.
    static MaterialDb from_csv(std::istream& in);
    static MaterialDb from_csv_file(const std::string& path);

    /// Case-insensitive lookup; throws UnknownMaterialError listing valid names.
    const Material& lookup(std::string_view name) const;
    std::optional<MaterialId> find(std::string_view name) const;

    /// Throws UnknownMaterialError for ids outside the table.
    const Material& by_id(MaterialId id) const;
    bool contains(MaterialId id) const { return id != kNoMaterial && id <= rows_.size(); }

    const std::vector<Material>& materials() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

    void write_csv(std::ostream& out) const;

private:
    std::vector<Material> rows_;
};

inline double albedo(const Material& m) { return 1.0 - m.emissivity; }

/// h_rad = 4 eps sigma T_ref^3, h_cond = k / delta, h_conv passed through.
TransferCoefficients transfer_coefficients(double emissivity, double conductivity, double delta,
                                           double t_ref, double h_conv);
TransferCoefficients transfer_coefficients(const Material& m, double delta, double t_ref,
                                           double h_conv);

/// Each probability is h_mode / h_total. Throws DegenerateInterfaceError when h_total is 0.
ModeProbabilities mode_probabilities(const TransferCoefficients& c);

/// Mean of the exponential time rewind of one conductive step on a surface.
double mean_rewind_time(const Material& m, double delta);

std::string_view to_string(ReflectanceKind kind);

}  // namespace heatmat
