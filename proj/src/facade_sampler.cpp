// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/facade_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "heatmat/errors.hpp"

namespace heatmat {

namespace {

using Rect = FacadeLayout::Rect;

// Window square plus frame band centred in the panel [x0, x1] x [0, 1].
// `window` and `frame` are area fractions of the whole tile.
void place_openings(double x0, double x1, double window, double frame, std::vector<Rect>& out,
                    std::vector<std::string>& warnings, const char* level)
{
    const double w = x1 - x0;
    if (w <= 0.0) {
        return;
    }
    double wf = window / w;  // fractions of this panel
    double ff = frame / w;
    if (wf + ff > 1.0) {
        std::ostringstream os;
        os << level << ": window and frame exceed their panel; "
           << 100.0 * (wf + ff - 1.0) * w << "% of the tile moved to main";
        warnings.push_back(os.str());
        const double scale = 1.0 / (wf + ff);
        wf *= scale;
        ff *= scale;
    }
    if (wf <= 0.0 && ff > 0.0) {
        std::ostringstream os;
        os << level << ": frame without a window cannot form a band; " << 100.0 * frame
           << "% of the tile moved to main";
        warnings.push_back(os.str());
        ff = 0.0;
    }
    const double cx = 0.5 * (x0 + x1);
    const double sw = std::sqrt(wf);
    const double so = std::sqrt(wf + ff);
    if (wf > 0.0) {
        out.push_back({cx - 0.5 * sw * w, cx + 0.5 * sw * w, 0.5 - 0.5 * sw, 0.5 + 0.5 * sw,
                       FacadeComponent::window});
    }
    if (ff > 0.0) {
        out.push_back({cx - 0.5 * so * w, cx + 0.5 * so * w, 0.5 - 0.5 * so, 0.5 + 0.5 * so,
                       FacadeComponent::frame});
    }
}

void check_level(const FacadeComposition& c, int first, const char* level)
{
    int sum = 0;
    for (int k = first; k < first + 4; ++k) {
        const SlotValue& v = c.slots[k];
        if (v.percentage < 0 || v.percentage > 100) {
            throw CompositionError(std::string(level) + " percentage outside 0..100");
        }
        if (v.percentage > 0 && v.material == kNoMaterial) {
            throw CompositionError(std::string(level) + " component with coverage but no material");
        }
        sum += v.percentage;
    }
    if (sum != 100) {
        throw CompositionError(std::string(level) + " percentages sum to " + std::to_string(sum) +
                               ", expected 100");
    }
}

}  // namespace

std::string_view to_string(FacadeComponent c)
{
    switch (c) {
    case FacadeComponent::main: return "main";
    case FacadeComponent::window: return "window";
    case FacadeComponent::frame: return "frame";
    case FacadeComponent::door: return "door";
    case FacadeComponent::shutter: return "shutter";
    }
    return "?";
}

void FacadePattern::validate() const
{
    if (!(width > 0.0 && height > 0.0 && max_door_width > 0.0)) {
        throw ArgumentError("facade pattern width, height and max door width must be positive");
    }
}

FacadeLayout::FacadeLayout(const FacadeComposition& composition, const FacadePattern& pattern)
    : composition_(composition), pattern_(pattern)
{
    pattern_.validate();
    check_level(composition_, 0, "ground level");
    check_level(composition_, 4, "upper level");

    auto pct = [&](FacadeSlot s) { return composition_[s].percentage / 100.0; };

    // Ground floor: bottom-anchored centred door, openings in the side panels.
    const double door = pct(FacadeSlot::ground_doors);
    double door_w = 0.0;
    if (door > 0.0) {
        door_w = std::min(door, pattern_.max_door_width / pattern_.width);
        double door_h = door / door_w;
        if (door_h > 1.0) {
            std::ostringstream os;
            os << "ground level: door wider than max_door_width; " << 100.0 * (door - door_w)
               << "% of the tile moved to main";
            warnings_.push_back(os.str());
            door_h = 1.0;
        }
        ground_.push_back({0.5 - 0.5 * door_w, 0.5 + 0.5 * door_w, 0.0, door_h,
                           FacadeComponent::door});
    }
    const double gwin = pct(FacadeSlot::ground_windows);
    const double gframe = pct(FacadeSlot::ground_frames);
    if (door_w > 0.0) {
        const double side = 0.5 * (1.0 - door_w);
        place_openings(0.0, side, 0.5 * gwin, 0.5 * gframe, ground_, warnings_, "ground level");
        place_openings(1.0 - side, 1.0, 0.5 * gwin, 0.5 * gframe, ground_, warnings_,
                       "ground level");
    } else {
        place_openings(0.0, 1.0, gwin, gframe, ground_, warnings_, "ground level");
    }

    // Upper floors: window, frame band, shutters flanking the frame square.
    place_openings(0.0, 1.0, pct(FacadeSlot::upper_windows), pct(FacadeSlot::upper_frames),
                   upper_, warnings_, "upper level");
    const double shutter = pct(FacadeSlot::upper_shutters);
    if (shutter > 0.0) {
        double so = 0.0;
        for (const Rect& r : upper_) {
            so = std::max(so, r.y1 - r.y0);
        }
        if (so <= 0.0) {
            std::ostringstream os;
            os << "upper level: shutters need a window; " << 100.0 * shutter
               << "% of the tile moved to main";
            warnings_.push_back(os.str());
        } else {
            double each = 0.5 * shutter / so;
            const double room = 0.5 * (1.0 - so);
            if (each > room) {
                std::ostringstream os;
                os << "upper level: shutters do not fit beside the window; "
                   << 100.0 * 2.0 * (each - room) * so << "% of the tile moved to main";
                warnings_.push_back(os.str());
                each = room;
            }
            const double y0 = 0.5 - 0.5 * so;
            const double y1 = 0.5 + 0.5 * so;
            const double xl = 0.5 - 0.5 * so;
            const double xr = 0.5 + 0.5 * so;
            upper_.push_back({xl - each, xl, y0, y1, FacadeComponent::shutter});
            upper_.push_back({xr, xr + each, y0, y1, FacadeComponent::shutter});
        }
    }
}

FacadeComponent FacadeLayout::component_at(bool ground, double fx, double fy) const
{
    for (const Rect& r : ground ? ground_ : upper_) {
        if (r.contains(fx, fy)) {
            return r.component;
        }
    }
    return FacadeComponent::main;
}

MaterialId FacadeLayout::material_of(bool ground, FacadeComponent c) const
{
    FacadeSlot s = FacadeSlot::upper_main;
    switch (c) {
    case FacadeComponent::main: s = ground ? FacadeSlot::ground_main : FacadeSlot::upper_main; break;
    case FacadeComponent::window:
        s = ground ? FacadeSlot::ground_windows : FacadeSlot::upper_windows;
        break;
    case FacadeComponent::frame:
        s = ground ? FacadeSlot::ground_frames : FacadeSlot::upper_frames;
        break;
    case FacadeComponent::door: s = FacadeSlot::ground_doors; break;
    case FacadeComponent::shutter: s = FacadeSlot::upper_shutters; break;
    }
    const MaterialId m = composition_[s].material;
    if (m == kNoMaterial) {
        // Zero-coverage component reached through a boundary tie.
        return composition_[ground ? FacadeSlot::ground_main : FacadeSlot::upper_main].material;
    }
    return m;
}

FacadeUV facade_uv(Vec3 point, const MapSet& maps, std::size_t idx, double building_height)
{
    Vec2 a;
    Vec2 b;
    if (!facade_chord(maps, idx, a, b)) {
        throw OffFacadeError("cell " + std::to_string(idx) + " carries no facade");
    }
    const double tol = 1e-9 * std::max(1.0, building_height);
    if (point.z < -tol || point.z > building_height + tol) {
        throw OffFacadeError("height " + std::to_string(point.z) + " m outside facade of " +
                             std::to_string(building_height) + " m");
    }
    const Vec2 d = b - a;
    const double len = length(d);
    const double s = len > 0.0 ? dot(point.xy() - a, d) / len : 0.0;
    double u = maps.u_coord[idx] + s / maps.perimeter_m[idx];
    u -= std::floor(u);
    if (u >= 1.0) {
        u = 0.0;
    }
    return {u, std::clamp(point.z / building_height, 0.0, 1.0)};
}

FacadePoint sample_component(double u, double h, const FacadeLayout& layout,
                             double building_height, double perimeter)
{
    const FacadePattern& p = layout.pattern();
    const double x = u * perimeter;
    const double z = h * building_height;
    const double tx = x / p.width;
    const double tz = z / p.height;
    const bool ground = tz < 1.0;
    FacadePoint out;
    out.u = u;
    out.h = h;
    out.component = layout.component_at(ground, tx - std::floor(tx), tz - std::floor(tz));
    out.material = layout.material_of(ground, out.component);
    return out;
}

FacadePoint sample_component(double u, double h, const FacadeComposition& composition,
                             const FacadePattern& pattern, double building_height,
                             double perimeter)
{
    return sample_component(u, h, FacadeLayout(composition, pattern), building_height, perimeter);
}

double characteristic_delta(const FacadePattern& pattern)
{
    pattern.validate();
    return std::min(pattern.width, pattern.height) / 20.0;
}

}  // namespace heatmat
