// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/material_db.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "heatmat/errors.hpp"

namespace heatmat {

namespace {

bool iequals(std::string_view a, std::string_view b)
{
    return a.size() == b.size() &&
           std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) ==
                      std::tolower(static_cast<unsigned char>(y));
           });
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_number(std::string_view field, int line, const char* column)
{
    field = trim(field);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw ParseError("material csv line " + std::to_string(line) + ": bad " + column +
                         " value '" + std::string(field) + "'");
    }
    return value;
}

void validate(const Material& m)
{
    if (!(m.heat_capacity > 0.0 && m.conductivity > 0.0 && m.density > 0.0)) {
        throw ArgumentError("material '" + m.name +
                            "': heat capacity, conductivity and density must be positive");
    }
    if (!(m.emissivity >= 0.0 && m.emissivity <= 1.0)) {
        throw ArgumentError("material '" + m.name + "': emissivity must lie in [0, 1]");
    }
}

}  // namespace

MaterialDb::MaterialDb(std::vector<Material> rows) : rows_(std::move(rows))
{
    if (rows_.size() > 255) {
        throw ArgumentError("material database holds at most 255 entries");
    }
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        Material& m = rows_[i];
        m.id = static_cast<MaterialId>(i + 1);
        validate(m);
        std::string key = m.name;
        std::transform(key.begin(), key.end(), key.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (!seen.insert(key).second) {
            throw ArgumentError("duplicate material name '" + m.name + "'");
        }
    }
}

const MaterialDb& MaterialDb::builtin()
{
    using enum ReflectanceKind;
    static const MaterialDb db(std::vector<Material>{
        {0, "Brick", 790, 0.9, 1920, 0.93, lambertian},
        {0, "Aluminium", 903, 237, 2702, 0.03, specular},
        {0, "Concrete", 880, 1.4, 2300, 0.88, lambertian},
        {0, "Steel", 456, 15.6, 7913, 0.85, lambertian},
        {0, "Glass", 840, 1, 500, 0.93, specular},
        {0, "Wood", 1880, 0.12, 450, 0.9, lambertian},
        {0, "Terracotta", 1800, 0.8, 780, 0.6, lambertian},
        {0, "Limestone", 1000, 1.7, 2200, 0.95, lambertian},
        {0, "Stone", 840, 2.68, 2550, 0.87, lambertian},
        {0, "Cement", 920, 0.43, 1283, 0.54, lambertian},
        {0, "Asphalt", 1000, 0.5, 1700, 0.94, lambertian},
        {0, "Slate", 1000, 2.2, 2400, 0.97, lambertian},
    });
    return db;
}

MaterialDb MaterialDb::from_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("material csv: empty input");
    }
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        line.erase(0, 3);
    }
    if (trim(line) != "name,heat_capacity,conductivity,density,emissivity,reflectance") {
        throw ParseError("material csv: unexpected header '" + line + "'");
    }
    std::vector<Material> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        std::vector<std::string_view> fields;
        std::string_view rest = line;
        for (;;) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) {
                break;
            }
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 6) {
            throw ParseError("material csv line " + std::to_string(line_no) +
                             ": expected 6 fields, got " + std::to_string(fields.size()));
        }
        Material m;
        m.name = std::string(trim(fields[0]));
        m.heat_capacity = parse_number(fields[1], line_no, "heat_capacity");
        m.conductivity = parse_number(fields[2], line_no, "conductivity");
        m.density = parse_number(fields[3], line_no, "density");
        m.emissivity = parse_number(fields[4], line_no, "emissivity");
        const auto kind = trim(fields[5]);
        if (iequals(kind, "lambertian")) {
            m.reflectance = ReflectanceKind::lambertian;
        } else if (iequals(kind, "specular")) {
            m.reflectance = ReflectanceKind::specular;
        } else {
            throw ParseError("material csv line " + std::to_string(line_no) +
                             ": reflectance must be lambertian or specular");
        }
        rows.push_back(std::move(m));
    }
    try {
        return MaterialDb(std::move(rows));
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("material csv: ") + e.what());
    }
}

MaterialDb MaterialDb::from_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open material csv '" + path + "'");
    }
    return from_csv(in);
}

std::optional<MaterialId> MaterialDb::find(std::string_view name) const
{
    for (const Material& m : rows_) {
        if (iequals(m.name, trim(name))) {
            return m.id;
        }
    }
    return std::nullopt;
}

const Material& MaterialDb::lookup(std::string_view name) const
{
    if (auto id = find(name)) {
        return rows_[*id - 1];
    }
    std::string msg = "unknown material '" + std::string(name) + "'; valid names:";
    for (const Material& m : rows_) {
        msg += ' ';
        msg += m.name;
    }
    throw UnknownMaterialError(msg);
}

const Material& MaterialDb::by_id(MaterialId id) const
{
    if (!contains(id)) {
        throw UnknownMaterialError("unknown material id " + std::to_string(id));
    }
    return rows_[id - 1];
}

void MaterialDb::write_csv(std::ostream& out) const
{
    out << "name,heat_capacity,conductivity,density,emissivity,reflectance\n";
    for (const Material& m : rows_) {
        out << m.name << ',' << m.heat_capacity << ',' << m.conductivity << ',' << m.density
            << ',' << m.emissivity << ',' << to_string(m.reflectance) << '\n';
    }
}

TransferCoefficients transfer_coefficients(double emissivity, double conductivity, double delta,
                                           double t_ref, double h_conv)
{
    if (!(delta > 0.0)) {
        throw ArgumentError("transfer coefficients: delta must be positive");
    }
    if (!(t_ref > 0.0)) {
        throw ArgumentError("transfer coefficients: reference temperature must be positive");
    }
    TransferCoefficients c;
    c.h_rad = 4.0 * emissivity * kStefanBoltzmann * t_ref * t_ref * t_ref;
    c.h_cond = conductivity / delta;
    c.h_conv = h_conv;
    c.h_total = c.h_rad + c.h_conv + c.h_cond;
    return c;
}

TransferCoefficients transfer_coefficients(const Material& m, double delta, double t_ref,
                                           double h_conv)
{
    return transfer_coefficients(m.emissivity, m.conductivity, delta, t_ref, h_conv);
}

ModeProbabilities mode_probabilities(const TransferCoefficients& c)
{
    if (!(c.h_total > 0.0)) {
        throw DegenerateInterfaceError("all heat transfer coefficients vanish at this interface");
    }
    const double inv = 1.0 / c.h_total;
    return {c.h_rad * inv, c.h_conv * inv, c.h_cond * inv};
}

double mean_rewind_time(const Material& m, double delta)
{
    return m.density * m.heat_capacity * delta * delta / (4.0 * m.conductivity);
}

std::string_view to_string(ReflectanceKind kind)
{
    return kind == ReflectanceKind::specular ? "specular" : "lambertian";
}

}  // namespace heatmat
