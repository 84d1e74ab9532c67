// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
#include "heatmat/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "heatmat/city_encoder.hpp"
#include "heatmat/errors.hpp"
#include "heatmat/geojson.hpp"
#include "heatmat/solar_model.hpp"

namespace heatmat {

namespace fs = std::filesystem;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

std::string out_dir_for(const Scenario& s, const RunOptions& opt)
{
    const std::string dir = opt.out_dir.empty() ? s.resolve(s.output_dir) : opt.out_dir;
    fs::create_directories(dir);
    return dir;
}

std::string join(const std::string& dir, const std::string& name)
{
    return (fs::path(dir) / name).string();
}

ProgressFn progress_for(const RunOptions& opt, const std::string& label)
{
    if (opt.quiet) {
        return {};
    }
    return [label, last = -1](int done, int total) mutable {
        const int pct = total > 0 ? done * 100 / total : 100;
        if (pct / 10 != last / 10 || done == total) {
            last = pct;
            std::fprintf(stderr, "\r%s %3d%%", label.c_str(), pct);
            if (done == total) {
                std::fputc('\n', stderr);
            }
        }
    };
}

void write_preview(const Raster& r, double lo, double hi, const std::string& path)
{
    write_pgm(r, lo, hi, path);
    nlohmann::ordered_json w;
    w["min_k"] = lo;
    w["max_k"] = hi;
    w["mapping"] = "linear, 0 at min_k, 255 at max_k, clamped, north row first";
    write_text_atomic(path + ".json", w.dump(2) + "\n");
}

nlohmann::ordered_json summary_json(const WhatIfSummary& s)
{
    nlohmann::ordered_json j;
    j["cells"] = s.cells;
    j["non_negative"] = s.non_negative;
    j["fraction_non_negative"] = s.fraction_non_negative;
    j["max_k"] = std::isfinite(s.max_difference) ? nlohmann::ordered_json(s.max_difference) : nullptr;
    j["mean_k"] = s.mean_difference;
    return j;
}

std::string fmt(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

int resolve_threads(std::optional<int> flag)
{
    if (flag) {
        if (*flag < 0) {
            throw ArgumentError("--threads must be >= 0");
        }
        return *flag;
    }
    if (const char* env = std::getenv("HEATMAT_THREADS"); env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (*end != '\0' || v < 0) {
            throw ArgumentError(std::string("HEATMAT_THREADS: expected a non-negative integer, got '") +
                                env + "'");
        }
        return static_cast<int>(v);
    }
    return 0;
}

void apply_overrides(Scenario& s, const RunOptions& opt)
{
    if (opt.seed) {
        s.config.seed = *opt.seed;
    }
    if (opt.spp) {
        s.config.spp = *opt.spp;
    }
    if (opt.threads || std::getenv("HEATMAT_THREADS")) {
        s.config.threads = resolve_threads(opt.threads);
    }
    s.config.validate();
}

EncodeSummary cmd_encode(const std::string& geojson_path, const GridSpec& grid,
                         const std::string& out_path, const std::string& materials_csv,
                         const std::string& ground_material, std::ostream* log)
{
    grid.validate();
    const MaterialDb db = materials_csv.empty() ? MaterialDb::builtin() : MaterialDb::from_csv_file(materials_csv);
    const auto fps = load_footprints(geojson_path, db);
    EncodeSummary sum;
    if (fps.empty()) {
        sum.warnings.push_back("empty FeatureCollection: the map is all ground");
    }
    EncodeResult r = encode_city(fps, grid, db.lookup(ground_material).id);
    for (const auto& [id, why] : r.report.rejected) {
        sum.warnings.push_back("building " + std::to_string(id) + " rejected: " + why);
    }
    if (r.report.clipped_footprints > 0) {
        sum.warnings.push_back(std::to_string(r.report.clipped_footprints) + " footprint(s) clipped to the grid");
    }
    sum.buildings = fps.size() - r.report.rejected.size();
    for (std::size_t k = 0; k < r.maps.cells(); ++k) {
        sum.building_cells += r.maps.building_id[k] != 0;
        sum.facade_cells += r.maps.has_facade(k);
    }
    if (const auto parent = fs::path(out_path).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    save(r.maps, out_path);
    if (log) {
        *log << "grid " << grid.width << "x" << grid.height << " @ " << grid.cell_size << " m\n"
             << "buildings " << sum.buildings << ", building cells " << sum.building_cells
             << ", facade cells " << sum.facade_cells << ", corner flags " << sum.corner_flags << "\n"
             << "layers building_id height_m roof_material ground_material sdf_m facade_azimuth_rad "
                "u_coord perimeter_m facade_slots[8] initial_temperature_k emissivity_override\n";
        for (const auto& w : sum.warnings) {
            *log << "warning: " << w << "\n";
        }
        *log << "wrote " << out_path << "\n";
    }
    return sum;
}

std::string stats_json(const SimulationResult& r, const SimulationConfig& cfg)
{
    nlohmann::ordered_json j;
    j["width"] = r.temperature.width;
    j["height"] = r.temperature.height;
    j["spp"] = cfg.spp;
    j["seed"] = cfg.seed;
    j["valid_paths"] = r.stats.valid_paths;
    j["discarded_paths"] = r.stats.discarded_paths;
    j["discarded_transitions"] = r.stats.discarded_transitions;
    j["discarded_bounces"] = r.stats.discarded_bounces;
    j["trace_budget_errors"] = r.stats.trace_budget_errors;
    j["discard_fraction"] = r.stats.discard_fraction();
    j["discard_warning"] = r.stats.discard_warning();
    j["invalid_pixels"] = r.stats.invalid_pixels;
    j["mean_std_error_k"] = r.stats.mean_std_error;
    double sum = 0.0;
    double lo = kInf;
    double hi = -kInf;
    std::size_t n = 0;
    for (double v : r.temperature.values) {
        if (std::isfinite(v)) {
            sum += v;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            ++n;
        }
    }
    j["mean_temperature_k"] = n ? nlohmann::ordered_json(sum / n) : nullptr;
    j["min_temperature_k"] = n ? nlohmann::ordered_json(lo) : nullptr;
    j["max_temperature_k"] = n ? nlohmann::ordered_json(hi) : nullptr;
    return j.dump(2) + "\n";
}

std::string profile_csv(const GridSpec& grid, const Raster& r, Vec2 a, Vec2 b, int samples)
{
    std::ostringstream os;
    os.precision(10);
    os << "distance_m,x_m,y_m,temperature_k\n";
    const double len = length(b - a);
    for (int k = 0; k < samples; ++k) {
        const double t = samples > 1 ? static_cast<double>(k) / (samples - 1) : 0.0;
        const Vec2 p = a + (b - a) * t;
        const auto v = sample_bilinear(grid, r, p);
        os << t * len << ',' << p.x << ',' << p.y << ',';
        if (v && std::isfinite(*v)) {
            os << *v;
        }
        os << '\n';
    }
    return os.str();
}

SimulateOutputs cmd_simulate(Scenario& s, const RunOptions& opt)
{
    apply_overrides(s, opt);
    LoadedScene scene = load_scene(s);
    const std::string dir = out_dir_for(s, opt);
    if (opt.log) {
        for (const auto& w : scene.warnings) {
            *opt.log << "warning: " << w << "\n";
        }
    }
    SimulateOutputs out;
    out.result = simulate(scene.maps, scene.db, s.config, progress_for(opt, "simulate"));
    out.raster = join(dir, "temperature.hm25");
    out.pgm = join(dir, "temperature.pgm");
    out.stats = join(dir, "stats.json");
    save_raster(scene.maps.grid, out.result.temperature, "temperature_k", out.raster);
    write_preview(out.result.temperature, s.pgm_min_k, s.pgm_max_k, out.pgm);
    write_text_atomic(out.stats, stats_json(out.result, s.config));
    if (s.profile) {
        out.profile = join(dir, "profile.csv");
        write_text_atomic(out.profile, profile_csv(scene.maps.grid, out.result.temperature, (*s.profile)[0],
                                                   (*s.profile)[1], s.profile_samples));
    }
    if (opt.log) {
        const auto& st = out.result.stats;
        *opt.log << "paths valid " << st.valid_paths << ", discarded " << st.discarded_paths
                 << " (" << fmt(100.0 * st.discard_fraction()) << "%), mean std error "
                 << fmt(st.mean_std_error) << " K\n";
        if (st.discard_warning()) {
            *opt.log << "warning: more than 1% of paths were discarded; the estimate is biased\n";
        }
        *opt.log << "wall time " << fmt(st.wall_seconds) << " s on " << st.threads << " thread(s)\n"
                 << "wrote " << out.raster << "\n";
    }
    return out;
}

ChainOutputs cmd_chain(Scenario& s, const RunOptions& opt)
{
    apply_overrides(s, opt);
    if (s.chain.empty()) {
        throw ConfigError("chain: no timestamps configured");
    }
    LoadedScene scene = load_scene(s);
    const std::string dir = out_dir_for(s, opt);
    const auto results = chain_simulate(scene.maps, scene.db, s.config, s.chain, progress_for(opt, "chain"));
    ChainOutputs out;
    std::ostringstream csv;
    csv.precision(10);
    csv << "step,local_time,air_temperature_k,mean_temperature_k,mean_std_error_k\n";
    double wall = 0.0;
    for (std::size_t k = 0; k < results.size(); ++k) {
        const auto& r = results[k];
        char name[32];
        std::snprintf(name, sizeof name, "step_%03zu", k);
        const std::string raster = join(dir, std::string(name) + ".hm25");
        save_raster(scene.maps.grid, r.temperature, "temperature_k", raster);
        write_preview(r.temperature, s.pgm_min_k, s.pgm_max_k, join(dir, std::string(name) + ".pgm"));
        write_text_atomic(join(dir, std::string(name) + "_stats.json"), stats_json(r, s.config));
        if (results.size() == 1) {
            save_raster(scene.maps.grid, r.temperature, "temperature_k", join(dir, "temperature.hm25"));
        }
        double sum = 0.0;
        std::size_t n = 0;
        for (double v : r.temperature.values) {
            if (std::isfinite(v)) {
                sum += v;
                ++n;
            }
        }
        const double mean = n ? sum / n : kNaN;
        const double air = s.config.air_temperature.at(s.chain[k].seconds_of_day());
        out.rasters.push_back(raster);
        out.mean_temperature.push_back(mean);
        out.air_temperature.push_back(air);
        csv << k << ',' << s.chain[k].to_string() << ',' << air << ',' << mean << ','
            << r.stats.mean_std_error << '\n';
        wall += r.stats.wall_seconds;
        if (opt.log) {
            *opt.log << s.chain[k].to_string() << "  air " << fmt(air) << " K  mean surface " << fmt(mean)
                     << " K\n";
        }
    }
    write_text_atomic(join(dir, "chain.csv"), csv.str());
    if (opt.log) {
        *opt.log << "wall time " << fmt(wall) << " s\nwrote " << results.size() << " step(s) to " << dir << "\n";
    }
    return out;
}

RegionMasks region_masks(const MapSet& maps)
{
    RegionMasks m;
    const std::size_t n = maps.cells();
    m.roofs.assign(n, 0);
    m.far_ground.assign(n, 0);
    m.in_between.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        if (maps.building_id[k] != 0) {
            m.roofs[k] = 1;
        } else if (maps.sdf_m[k] >= 10.0) {
            m.far_ground[k] = 1;
        } else {
            m.in_between[k] = 1;
        }
    }
    return m;
}

void apply_facade_override(LoadedScene& scene, const std::string& override_spec)
{
    if (override_spec.empty()) {
        return;
    }
    if (override_spec.find('=') == std::string::npos) {
        apply_facade_main(scene.maps, scene.db.lookup(override_spec).id);
        return;
    }
    std::stringstream ss(override_spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("facade override '" + item + "' lacks '='");
        }
        std::uint32_t id = 0;
        try {
            id = static_cast<std::uint32_t>(std::stoul(item.substr(0, eq)));
        } catch (const std::logic_error&) {
            throw ConfigError("facade override '" + item + "': bad building id");
        }
        std::string name = item.substr(eq + 1);
        name.erase(0, name.find_first_not_of(' '));
        name.erase(name.find_last_not_of(' ') + 1);
        if (apply_facade_main(scene.maps, scene.db.lookup(name).id, id) == 0) {
            scene.warnings.push_back("facade override: building " + std::to_string(id) + " has no facade cells");
        }
    }
}

DiffOutputs cmd_diff(Scenario& s, const std::string& override_a, const std::string& override_b,
                     const RunOptions& opt)
{
    apply_overrides(s, opt);
    const std::string a_spec = override_a.empty() ? s.diff_a : override_a;
    const std::string b_spec = override_b.empty() ? s.diff_b : override_b;
    if (a_spec.empty() || b_spec.empty()) {
        throw ConfigError("diff needs two facade overrides (diff_a / diff_b or --a / --b)");
    }
    LoadedScene base = load_scene(s);
    LoadedScene a = base;
    LoadedScene b = base;
    apply_facade_override(a, a_spec);
    apply_facade_override(b, b_spec);
    const std::string dir = out_dir_for(s, opt);
    if (opt.log) {
        for (const auto& w : a.warnings) {
            *opt.log << "warning: " << w << "\n";
        }
    }

    const SimulationResult ra = simulate(a.maps, a.db, s.config, progress_for(opt, "a"));
    const SimulationResult rb = simulate(b.maps, b.db, s.config, progress_for(opt, "b"));
    DiffOutputs out;
    const GridSpec& grid = base.maps.grid;
    out.difference = Raster(grid.width, grid.height, kNaN);
    for (std::size_t k = 0; k < out.difference.values.size(); ++k) {
        out.difference.values[k] = rb.temperature.values[k] - ra.temperature.values[k];
    }
    save_raster(grid, ra.temperature, "temperature_k", join(dir, "a.hm25"));
    save_raster(grid, rb.temperature, "temperature_k", join(dir, "b.hm25"));
    save_raster(grid, out.difference, "difference_k", join(dir, "diff.hm25"));
    write_preview(out.difference, -3.0, 3.0, join(dir, "diff.pgm"));

    const RegionMasks masks = region_masks(base.maps);
    const std::vector<std::uint8_t> all(grid.cells(), 1);
    out.all = summarize_difference(out.difference, all);
    out.roofs = summarize_difference(out.difference, masks.roofs);
    out.far_ground = summarize_difference(out.difference, masks.far_ground);
    out.in_between = summarize_difference(out.difference, masks.in_between);
    if (s.config.sun_enabled) {
        const SunPosition sp = sun_position(s.config.latitude_deg, s.config.longitude_deg, s.config.time);
        out.sunlit_near_facade = summarize_difference(out.difference, sunlit_near_facade_mask(base.maps, sp.direction, 3.0));
    }

    nlohmann::ordered_json j;
    j["a"] = a_spec;
    j["b"] = b_spec;
    j["seed"] = s.config.seed;
    j["spp"] = s.config.spp;
    j["all"] = summary_json(out.all);
    j["roofs"] = summary_json(out.roofs);
    j["ground_far"] = summary_json(out.far_ground);
    j["ground_in_between"] = summary_json(out.in_between);
    j["sunlit_near_facade"] = summary_json(out.sunlit_near_facade);
    out.summary_path = join(dir, "diff_summary.json");
    write_text_atomic(out.summary_path, j.dump(2) + "\n");
    if (opt.log) {
        *opt.log << "b - a: max " << fmt(out.all.max_difference) << " K, mean " << fmt(out.all.mean_difference)
                 << " K\n  roofs mean " << fmt(out.roofs.mean_difference) << " K, far ground mean "
                 << fmt(out.far_ground.mean_difference) << " K, in-between mean "
                 << fmt(out.in_between.mean_difference) << " K\n  sunlit near-facade: "
                 << out.sunlit_near_facade.cells << " cells, "
                 << fmt(100.0 * out.sunlit_near_facade.fraction_non_negative) << "% >= 0\n"
                 << "wall time " << fmt(ra.stats.wall_seconds + rb.stats.wall_seconds) << " s\n"
                 << "wrote " << out.summary_path << "\n";
    }
    return out;
}

SuiteReport cmd_validate(const std::string& suite, const SuiteOptions& suite_opt,
                         const std::string& out_dir, std::ostream* log)
{
    SuiteReport rep = run_suite(suite, suite_opt);
    fs::create_directories(out_dir);
    write_text_atomic(join(out_dir, suite + "_report.md"), rep.markdown());
    std::string csv;
    for (const auto& row : rep.csv) {
        csv += row + "\n";
    }
    write_text_atomic(join(out_dir, suite + "_report.csv"), csv);
    if (log) {
        *log << rep.markdown();
    }
    return rep;
}

}  // namespace heatmat
