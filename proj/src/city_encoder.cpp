// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/city_encoder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

#include "heatmat/errors.hpp"

namespace heatmat {

namespace {

constexpr int kGroundSlots[] = {0, 1, 2, 3};
constexpr int kUpperSlots[] = {4, 5, 6, 7};

void normalize_level(std::array<SlotValue, kFacadeSlotCount>& slots, const int (&idx)[4])
{
    int sum = 0;
    for (int k : idx) {
        sum += slots[k].percentage;
    }
    if (sum == 100) {
        return;
    }
    if (sum == 0) {
        slots[idx[0]].percentage = 100;
        return;
    }
    // Largest remainder; ties resolved toward the earlier slot.
    std::array<double, 4> exact{};
    int assigned = 0;
    for (int n = 0; n < 4; ++n) {
        exact[n] = 100.0 * slots[idx[n]].percentage / sum;
        slots[idx[n]].percentage = static_cast<int>(std::floor(exact[n]));
        assigned += slots[idx[n]].percentage;
    }
    std::array<int, 4> order{0, 1, 2, 3};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return exact[a] - std::floor(exact[a]) > exact[b] - std::floor(exact[b]);
    });
    for (int n = 0; assigned < 100; ++n, ++assigned) {
        ++slots[idx[order[n % 4]]].percentage;
    }
}

// Liang-Barsky clip of the infinite line p + t d against a rectangle.
bool clip_line(Vec2 p, Vec2 d, Vec2 lo, Vec2 hi, double& t0, double& t1)
{
    t0 = -std::numeric_limits<double>::infinity();
    t1 = std::numeric_limits<double>::infinity();
    const double pc[2] = {p.x, p.y};
    const double dc[2] = {d.x, d.y};
    const double lc[2] = {lo.x, lo.y};
    const double hc[2] = {hi.x, hi.y};
    for (int ax = 0; ax < 2; ++ax) {
        if (dc[ax] == 0.0) {
            if (pc[ax] < lc[ax] || pc[ax] > hc[ax]) {
                return false;
            }
            continue;
        }
        double ta = (lc[ax] - pc[ax]) / dc[ax];
        double tb = (hc[ax] - pc[ax]) / dc[ax];
        if (ta > tb) {
            std::swap(ta, tb);
        }
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    return t1 >= t0;
}

struct Piece {
    Vec2 a;
    Vec2 b;
    double arc = 0.0;
    bool in_grid = false;
    CellIndex cell;
    std::size_t edge = 0;
};

bool same_cell(const Piece& x, const Piece& y)
{
    return x.in_grid && y.in_grid && x.cell == y.cell;
}

}  // namespace

int FacadeComposition::ground_sum() const
{
    int s = 0;
    for (int k : kGroundSlots) {
        s += slots[k].percentage;
    }
    return s;
}

int FacadeComposition::upper_sum() const
{
    int s = 0;
    for (int k : kUpperSlots) {
        s += slots[k].percentage;
    }
    return s;
}

void FacadeComposition::normalize()
{
    for (const SlotValue& v : slots) {
        if (v.percentage < 0) {
            throw CompositionError("facade percentages must be non-negative");
        }
    }
    normalize_level(slots, kGroundSlots);
    normalize_level(slots, kUpperSlots);
}

std::string prepare_footprint(BuildingFootprint& fp)
{
    auto& ring = fp.polygon;
    for (const Vec2& v : ring) {
        if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
            return "non-finite vertex";
        }
    }
    if (ring.size() >= 2 && ring.front() == ring.back()) {
        ring.pop_back();
    }
    ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
    while (ring.size() >= 2 && ring.front() == ring.back()) {
        ring.pop_back();
    }
    if (ring.size() < 3) {
        return "fewer than 3 distinct vertices";
    }
    if (fp.id == 0) {
        return "building id 0 is reserved";
    }
    if (!(fp.height > 0.0) || !std::isfinite(fp.height)) {
        return "non-positive height";
    }
    const double area = signed_area(ring);
    if (area == 0.0) {
        return "zero-area polygon";
    }
    if (area < 0.0) {
        std::reverse(ring.begin(), ring.end());
    }
    if (!is_simple_ring(ring)) {
        return "self-intersecting polygon";
    }
    return {};
}

std::size_t traversal_origin(std::span<const Vec2> ring)
{
    std::size_t best = 0;
    for (std::size_t k = 1; k < ring.size(); ++k) {
        if (ring[k].y < ring[best].y || (ring[k].y == ring[best].y && ring[k].x < ring[best].x)) {
            best = k;
        }
    }
    return best;
}

MapSet rasterize_footprints(std::span<const BuildingFootprint> footprints, const GridSpec& grid,
                            MaterialId ground_material, RasterReport* report)
{
    MapSet maps = MapSet::blank(grid, ground_material);
    const double s = grid.cell_size;
    const double min_area = 1e-9 * s * s;
    std::vector<double> best_area(grid.cells(), 0.0);
    std::vector<const BuildingFootprint*> best_fp(grid.cells(), nullptr);

    for (const BuildingFootprint& fp : footprints) {
        BuildingFootprint copy = fp;
        const std::string why = prepare_footprint(copy);
        if (!why.empty()) {
            if (report) {
                report->rejected.emplace_back(fp.id, why);
            }
            continue;
        }
        Vec2 lo = copy.polygon.front();
        Vec2 hi = lo;
        for (const Vec2& v : copy.polygon) {
            lo = {std::min(lo.x, v.x), std::min(lo.y, v.y)};
            hi = {std::max(hi.x, v.x), std::max(hi.y, v.y)};
        }
        const Vec2 ghi = grid.extent_hi();
        if (report && (lo.x < grid.origin.x || lo.y < grid.origin.y || hi.x > ghi.x ||
                       hi.y > ghi.y)) {
            ++report->clipped_footprints;
        }
        const int i0 = std::max(0, static_cast<int>(std::floor((lo.x - grid.origin.x) / s)));
        const int j0 = std::max(0, static_cast<int>(std::floor((lo.y - grid.origin.y) / s)));
        const int i1 = std::min(grid.width - 1, static_cast<int>(std::floor((hi.x - grid.origin.x) / s)));
        const int j1 = std::min(grid.height - 1, static_cast<int>(std::floor((hi.y - grid.origin.y) / s)));
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                const Vec2 clo = grid.cell_lo(i, j);
                const auto clipped = clip_to_rect(copy.polygon, clo, {clo.x + s, clo.y + s});
                const double area = std::abs(signed_area(clipped));
                if (area <= min_area) {
                    continue;
                }
                const std::size_t idx = grid.index(i, j);
                const BuildingFootprint* cur = best_fp[idx];
                if (!cur || area > best_area[idx] || (area == best_area[idx] && fp.id < cur->id)) {
                    best_area[idx] = area;
                    best_fp[idx] = &fp;
                }
            }
        }
    }

    for (std::size_t idx = 0; idx < grid.cells(); ++idx) {
        const BuildingFootprint* fp = best_fp[idx];
        if (!fp) {
            continue;
        }
        maps.building_id[idx] = fp->id;
        maps.height_m[idx] = static_cast<float>(fp->height);
        maps.roof_material[idx] = fp->roof_material;
        const auto packed = pack_facade_slots(fp->composition);
        for (int k = 0; k < kFacadeSlotCount; ++k) {
            maps.facade_slots[k][idx] = packed[k];
        }
    }
    return maps;
}

CornerResult simplify_corners(const BuildingFootprint& fp, const GridSpec& grid)
{
    const auto& ring = fp.polygon;
    const std::size_t n = ring.size();
    const std::size_t start = traversal_origin(ring);
    const double s = grid.cell_size;
    const double probe = 1e-9 * s;

    // Split every edge at grid lines and attach each piece to the cell on its
    // outer side; walls lying on a grid line go to the exterior neighbour.
    std::vector<Piece> pieces;
    double arc = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
        const Vec2 p = ring[(start + e) % n];
        const Vec2 q = ring[(start + e + 1) % n];
        const Vec2 d = q - p;
        const double len = length(d);
        std::vector<double> ts{0.0, 1.0};
        if (d.x != 0.0) {
            const double gx0 = (std::min(p.x, q.x) - grid.origin.x) / s;
            const double gx1 = (std::max(p.x, q.x) - grid.origin.x) / s;
            for (double k = std::ceil(gx0); k <= gx1; k += 1.0) {
                ts.push_back((grid.origin.x + k * s - p.x) / d.x);
            }
        }
        if (d.y != 0.0) {
            const double gy0 = (std::min(p.y, q.y) - grid.origin.y) / s;
            const double gy1 = (std::max(p.y, q.y) - grid.origin.y) / s;
            for (double k = std::ceil(gy0); k <= gy1; k += 1.0) {
                ts.push_back((grid.origin.y + k * s - p.y) / d.y);
            }
        }
        std::sort(ts.begin(), ts.end());
        const Vec2 outward = Vec2{d.y, -d.x} * (1.0 / len);
        for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
            const double ta = std::clamp(ts[k], 0.0, 1.0);
            const double tb = std::clamp(ts[k + 1], 0.0, 1.0);
            if ((tb - ta) * len <= 1e-9 * s) {
                continue;
            }
            Piece piece;
            piece.a = p + d * ta;
            piece.b = p + d * tb;
            piece.arc = arc + ta * len;
            piece.edge = e;
            const Vec2 mid = p + d * (0.5 * (ta + tb)) + outward * probe;
            if (auto c = grid.locate(mid)) {
                piece.in_grid = true;
                piece.cell = *c;
            }
            pieces.push_back(piece);
        }
        arc += len;
    }

    struct Chain {
        std::size_t first;
        std::size_t last;  // inclusive, may wrap
    };
    std::vector<Chain> chains;
    for (std::size_t k = 0; k < pieces.size(); ++k) {
        if (!chains.empty() && same_cell(pieces[chains.back().last], pieces[k])) {
            chains.back().last = k;
        } else {
            chains.push_back({k, k});
        }
    }
    if (chains.size() > 1 && same_cell(pieces[chains.back().last], pieces[chains.front().first])) {
        // The chain that straddles the traversal origin comes first.
        chains.front().first = chains.back().first;
        chains.pop_back();
    }

    CornerResult result;
    std::map<std::pair<int, int>, std::vector<std::size_t>> per_cell;
    for (std::size_t c = 0; c < chains.size(); ++c) {
        if (pieces[chains[c].first].in_grid) {
            per_cell[{pieces[chains[c].first].cell.i, pieces[chains[c].first].cell.j}].push_back(c);
        }
    }
    // A corner whose vertex pokes into a neighbour cell leaves two chains in
    // this cell, one per incident edge. Only two edges cross the cell, so it
    // still gets one chord: entry of the first edge to exit of the second.
    std::vector<Chain> emit;
    std::set<std::pair<int, int>> flagged;
    for (const auto& [key, ids] : per_cell) {
        if (ids.size() == 1) {
            emit.push_back(chains[ids[0]]);
            continue;
        }
        if (ids.size() == 2) {
            const Chain& x = chains[ids[0]];
            const Chain& y = chains[ids[1]];
            const std::size_t ex = pieces[x.first].edge;
            const std::size_t ey = pieces[y.first].edge;
            if (pieces[x.last].edge == ex && pieces[y.last].edge == ey) {
                if ((ex + 1) % n == ey) {
                    emit.push_back({x.first, y.last});
                    continue;
                }
                if ((ey + 1) % n == ex) {
                    emit.push_back({y.first, x.last});
                    continue;
                }
            }
        }
        flagged.insert(key);
    }
    for (const Chain& ch : emit) {
        const Piece& head = pieces[ch.first];
        const std::pair<int, int> key{head.cell.i, head.cell.j};
        const Vec2 a = head.a;
        const Vec2 b = pieces[ch.last].b;
        const Vec2 d = b - a;
        if (length(d) <= 1e-9 * s) {
            flagged.insert(key);
            continue;
        }
        // Extend the chord to the cell border so the stored line reproduces it.
        const Vec2 clo = grid.cell_lo(head.cell.i, head.cell.j);
        double t0 = 0.0;
        double t1 = 1.0;
        FacadeSegment seg;
        seg.building = fp.id;
        seg.cell = head.cell;
        if (clip_line(a, d, clo, {clo.x + s, clo.y + s}, t0, t1)) {
            seg.a = a + d * t0;
            seg.b = a + d * t1;
        } else {
            seg.a = a;
            seg.b = b;
        }
        seg.arc_start = head.arc;
        if (ch.first > ch.last) {
            seg.arc_start -= arc;
        }
        result.segments.push_back(seg);
    }
    std::stable_sort(result.segments.begin(), result.segments.end(),
                     [](const FacadeSegment& x, const FacadeSegment& y) {
                         return x.arc_start < y.arc_start;
                     });
    for (const auto& [i, j] : flagged) {
        result.flagged.push_back({i, j});
    }
    return result;
}

std::vector<double> compute_sdf(std::span<const FacadeSegment> segments, const GridSpec& grid,
                                std::span<const std::uint32_t> building_id)
{
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> sdf(grid.cells(), inf);
    for (std::size_t k = 0; k < grid.cells(); ++k) {
        if (building_id[k] != 0) {
            sdf[k] = 0.0;
        }
    }
    if (segments.empty()) {
        return sdf;
    }

    // Uniform bucket grid over segment bounding boxes; ring search outward
    // until the next ring cannot hold anything closer.
    constexpr int kBucketCells = 8;
    const double bsize = kBucketCells * grid.cell_size;
    const int bw = (grid.width + kBucketCells - 1) / kBucketCells;
    const int bh = (grid.height + kBucketCells - 1) / kBucketCells;
    std::vector<std::vector<std::uint32_t>> buckets(static_cast<std::size_t>(bw) * bh);
    auto bucket_of = [&](double v, double o, int nmax) {
        return std::clamp(static_cast<int>(std::floor((v - o) / bsize)), 0, nmax - 1);
    };
    for (std::uint32_t k = 0; k < segments.size(); ++k) {
        const auto& sg = segments[k];
        const int bx0 = bucket_of(std::min(sg.a.x, sg.b.x), grid.origin.x, bw);
        const int bx1 = bucket_of(std::max(sg.a.x, sg.b.x), grid.origin.x, bw);
        const int by0 = bucket_of(std::min(sg.a.y, sg.b.y), grid.origin.y, bh);
        const int by1 = bucket_of(std::max(sg.a.y, sg.b.y), grid.origin.y, bh);
        for (int by = by0; by <= by1; ++by) {
            for (int bx = bx0; bx <= bx1; ++bx) {
                buckets[static_cast<std::size_t>(by) * bw + bx].push_back(k);
            }
        }
    }
    const int max_ring = std::max(bw, bh);
    for (int j = 0; j < grid.height; ++j) {
        for (int i = 0; i < grid.width; ++i) {
            const std::size_t idx = grid.index(i, j);
            if (building_id[idx] != 0) {
                continue;
            }
            const Vec2 c = grid.centroid(i, j);
            const int cbx = i / kBucketCells;
            const int cby = j / kBucketCells;
            double best = inf;
            for (int r = 0; r <= max_ring; ++r) {
                for (int by = cby - r; by <= cby + r; ++by) {
                    if (by < 0 || by >= bh) {
                        continue;
                    }
                    const bool edge_row = by == cby - r || by == cby + r;
                    for (int bx = cbx - r; bx <= cbx + r; bx += (edge_row ? 1 : 2 * r)) {
                        if (bx >= 0 && bx < bw) {
                            for (std::uint32_t k : buckets[static_cast<std::size_t>(by) * bw + bx]) {
                                best = std::min(best, point_segment_distance(
                                                          c, {segments[k].a, segments[k].b}));
                            }
                        }
                        if (r == 0) {
                            break;
                        }
                    }
                }
                // Anything beyond ring r sits at least r bucket widths away.
                if (best <= r * bsize) {
                    break;
                }
            }
            sdf[idx] = best;
        }
    }
    return sdf;
}

std::vector<UEntry> compute_umap(std::span<const FacadeSegment> segments, const GridSpec& grid)
{
    std::vector<UEntry> out;
    out.reserve(segments.size());
    double perimeter = 0.0;
    for (const FacadeSegment& sg : segments) {
        perimeter += length(sg.b - sg.a);
    }
    double cum = 0.0;
    for (const FacadeSegment& sg : segments) {
        const Vec2 d = sg.b - sg.a;
        const double len = length(d);
        const Vec2 n = Vec2{d.y, -d.x} * (1.0 / len);
        UEntry e;
        e.cell = sg.cell;
        e.u = cum / perimeter;
        e.perimeter = perimeter;
        e.azimuth = azimuth_of(n);
        e.offset = dot(sg.a - grid.centroid(sg.cell.i, sg.cell.j), n);
        out.push_back(e);
        cum += len;
    }
    return out;
}

std::uint16_t pack_slot(SlotValue v)
{
    if (v.percentage < 0 || v.percentage > 100) {
        throw PackingError("facade percentage " + std::to_string(v.percentage) +
                           " outside 0..100");
    }
    return static_cast<std::uint16_t>((static_cast<unsigned>(v.material) << 8) |
                                      static_cast<unsigned>(v.percentage));
}

SlotValue unpack_slot(std::uint16_t packed)
{
    return {static_cast<MaterialId>(packed >> 8), static_cast<int>(packed & 0xFFu)};
}

std::array<std::uint16_t, kFacadeSlotCount> pack_facade_slots(const FacadeComposition& c)
{
    std::array<std::uint16_t, kFacadeSlotCount> out{};
    for (int k = 0; k < kFacadeSlotCount; ++k) {
        out[k] = pack_slot(c.slots[k]);
    }
    return out;
}

FacadeComposition unpack_facade_slots(const std::array<std::uint16_t, kFacadeSlotCount>& packed)
{
    FacadeComposition c;
    for (int k = 0; k < kFacadeSlotCount; ++k) {
        c.slots[k] = unpack_slot(packed[k]);
    }
    return c;
}

EncodeResult encode_city(std::vector<BuildingFootprint> footprints, const GridSpec& grid,
                         MaterialId ground_material)
{
    grid.validate();
    EncodeResult result;
    std::set<std::uint32_t> ids;
    std::vector<BuildingFootprint> accepted;
    for (BuildingFootprint& fp : footprints) {
        if (!ids.insert(fp.id).second) {
            throw ArgumentError("duplicate building id " + std::to_string(fp.id));
        }
        const std::string why = prepare_footprint(fp);
        if (!why.empty()) {
            result.report.rejected.emplace_back(fp.id, why);
            continue;
        }
        fp.composition.normalize();
        accepted.push_back(std::move(fp));
    }
    result.maps = rasterize_footprints(accepted, grid, ground_material, &result.report);
    MapSet& maps = result.maps;

    std::set<std::uint32_t> present(maps.building_id.begin(), maps.building_id.end());
    std::unordered_map<std::size_t, std::uint32_t> owner;
    std::set<std::size_t> flagged;
    std::set<std::uint32_t> flagged_buildings;
    std::vector<std::vector<FacadeSegment>> per_building;
    for (const BuildingFootprint& fp : accepted) {
        if (!present.count(fp.id)) {
            continue;  // entirely outside the grid
        }
        CornerResult cr = simplify_corners(fp, grid);
        for (const CellIndex& c : cr.flagged) {
            flagged.insert(grid.index(c));
            flagged_buildings.insert(fp.id);
        }
        for (const FacadeSegment& sg : cr.segments) {
            const std::size_t idx = grid.index(sg.cell);
            auto [it, fresh] = owner.emplace(idx, fp.id);
            if (!fresh) {
                flagged.insert(idx);
                flagged_buildings.insert(fp.id);
                flagged_buildings.insert(it->second);
            }
        }
        per_building.push_back(std::move(cr.segments));
    }
    if (!flagged.empty()) {
        std::ostringstream msg;
        msg << flagged.size() << " cell(s) would need more than one facade segment (buildings";
        for (std::uint32_t id : flagged_buildings) {
            msg << ' ' << id;
        }
        msg << "); some walls are closer than one cell. Retry with cell_size_m <= "
            << grid.cell_size / 2;
        throw EncodeError(msg.str());
    }

    std::unordered_map<std::uint32_t, const BuildingFootprint*> by_id;
    for (const BuildingFootprint& fp : accepted) {
        by_id[fp.id] = &fp;
    }
    for (const auto& segs : per_building) {
        if (segs.empty()) {
            continue;
        }
        const auto entries = compute_umap(segs, grid);
        const auto packed = pack_facade_slots(by_id.at(segs.front().building)->composition);
        for (const UEntry& e : entries) {
            const std::size_t idx = grid.index(e.cell);
            maps.facade_building_id[idx] = segs.front().building;
            maps.u_coord[idx] = static_cast<float>(e.u);
            maps.perimeter_m[idx] = static_cast<float>(e.perimeter);
            maps.facade_azimuth_rad[idx] = static_cast<float>(e.azimuth);
            maps.facade_offset_m[idx] = static_cast<float>(e.offset);
            for (int k = 0; k < kFacadeSlotCount; ++k) {
                maps.facade_slots[k][idx] = packed[k];
            }
        }
        result.segments.insert(result.segments.end(), segs.begin(), segs.end());
    }
    maps.sdf_m = compute_sdf(result.segments, grid, maps.building_id);
    return result;
}

bool facade_chord(const MapSet& maps, std::size_t idx, Vec2& a, Vec2& b)
{
    if (!maps.has_facade(idx)) {
        return false;
    }
    const int i = static_cast<int>(idx % maps.grid.width);
    const int j = static_cast<int>(idx / maps.grid.width);
    const Vec2 n = from_azimuth(maps.facade_azimuth_rad[idx]);
    const Vec2 d{-n.y, n.x};
    const Vec2 p = maps.grid.centroid(i, j) + n * static_cast<double>(maps.facade_offset_m[idx]);
    const Vec2 lo = maps.grid.cell_lo(i, j);
    const double s = maps.grid.cell_size;
    // float32 azimuths tilt walls that lie on a grid line by ~1e-8 rad; a
    // slightly grown box keeps the whole chord instead of half of it.
    const double pad = 1e-6 * s;
    double t0 = 0.0;
    double t1 = 0.0;
    if (!clip_line(p, d, {lo.x - pad, lo.y - pad}, {lo.x + s + pad, lo.y + s + pad}, t0, t1)) {
        return false;
    }
    a = p + d * t0;
    b = p + d * t1;
    return true;
}

}  // namespace heatmat
