// Copyright 2026 The HeatMat Authors
// SPDX-License-Identifier: Apache-2.0
//
// heatmat: encode | simulate | chain | diff | validate | scene
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "heatmat/cli.hpp"
#include "heatmat/errors.hpp"
#include "heatmat/geojson.hpp"
#include "heatmat/scenario.hpp"
#include "heatmat/scenes.hpp"

namespace {

using namespace heatmat;

struct Common {
    std::string scenario;
    std::optional<std::uint64_t> seed;
    std::optional<int> spp;
    std::optional<int> threads;
    std::string out;
    bool quiet = false;

    void attach(CLI::App* app, bool needs_scenario = true)
    {
        auto* opt = app->add_option("--scenario", scenario, "scenario file");
        if (needs_scenario) {
            opt->required();
        }
        app->add_option("--seed", seed, "master seed");
        app->add_option("--spp", spp, "samples per pixel")->check(CLI::PositiveNumber);
        app->add_option("--threads", threads, "worker threads, 0 = auto (HEATMAT_THREADS fallback)")
            ->check(CLI::NonNegativeNumber);
        app->add_option("--out", out, "output directory (default: scenario output_dir)");
        app->add_flag("--quiet", quiet, "no progress or summaries");
    }

    RunOptions run_options() const
    {
        RunOptions o;
        o.seed = seed;
        o.spp = spp;
        o.threads = threads;
        o.out_dir = out;
        o.quiet = quiet;
        o.log = quiet ? nullptr : &std::cout;
        return o;
    }
};

int run(int argc, char** argv)
{
    CLI::App app{"heatmat: 2.5D urban surface temperature simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "heatmat 1.0.0");

    // encode
    Common enc_common;
    std::string geojson;
    std::string enc_out;
    std::string materials;
    std::string ground = "Asphalt";
    double ox = 0.0;
    double oy = 0.0;
    double cell = 0.5;
    int width = 0;
    int height = 0;
    auto* enc = app.add_subcommand("encode", "footprint GeoJSON -> HM25 map set");
    enc->add_option("--scenario", enc_common.scenario, "take geojson, grid and materials from a scenario");
    enc->add_option("--geojson", geojson, "FeatureCollection in local metric coordinates");
    enc->add_option("--materials", materials, "materials CSV (default: built-in database)");
    enc->add_option("--ground", ground, "ground material name");
    enc->add_option("--origin-x", ox, "grid origin x, m");
    enc->add_option("--origin-y", oy, "grid origin y, m");
    enc->add_option("--cell-size", cell, "cell size, m");
    enc->add_option("--width", width, "cells along x");
    enc->add_option("--height", height, "cells along y");
    enc->add_option("--out", enc_out, "output .hm25 path")->required();
    enc->add_flag("--quiet", enc_common.quiet, "no summary");

    Common sim_common;
    auto* sim = app.add_subcommand("simulate", "temperature raster for one instant");
    sim_common.attach(sim);

    Common chain_common;
    std::string chain_at;
    auto* chain = app.add_subcommand("chain", "sequence of rasters, each seeding the next");
    chain_common.attach(chain);
    chain->add_option("--at", chain_at, "comma-separated HH:MM or full datetimes (overrides `chain`)");

    Common diff_common;
    std::string diff_a;
    std::string diff_b;
    auto* diff = app.add_subcommand("diff", "common-seed difference between two facade overrides");
    diff_common.attach(diff);
    diff->add_option("--a", diff_a, "override a: material name or id=name list");
    diff->add_option("--b", diff_b, "override b");

    std::string suite;
    std::string val_out = "validation";
    SuiteOptions sopt;
    std::optional<int> val_threads;
    bool val_quiet = false;
    auto* val = app.add_subcommand("validate", "oracle comparison suite");
    val->add_option("suite", suite, "conduction | sdf | solar | convergence | null")
        ->required()
        ->check(CLI::IsMember(suite_names()));
    val->add_option("--seed", sopt.seed, "seed");
    val->add_option("--threads", val_threads, "worker threads, 0 = auto")->check(CLI::NonNegativeNumber);
    val->add_option("--walks", sopt.walks_per_cell, "conduction: walks per cell")->check(CLI::PositiveNumber);
    val->add_option("--stride", sopt.stride, "convergence: pixel stride, 1 = full grid")->check(CLI::PositiveNumber);
    val->add_option("--out", val_out, "report directory");
    val->add_flag("--quiet", val_quiet, "no report on stdout");

    std::string scene_name;
    std::string scene_out;
    auto* scene = app.add_subcommand("scene", "write a built-in scene as maps, GeoJSON and materials CSV");
    scene->add_option("name", scene_name, "canyon | district")->required();
    scene->add_option("--out", scene_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*enc) {
            GridSpec grid{{ox, oy}, cell, width, height};
            std::string geo = geojson;
            std::string mats = materials;
            std::string gnd = ground;
            if (!enc_common.scenario.empty()) {
                const Scenario s = load_scenario(enc_common.scenario);
                if (s.geojson_path.empty() || !s.grid) {
                    throw ConfigError("encode: the scenario must set geojson and the grid keys");
                }
                geo = s.resolve(s.geojson_path);
                mats = s.resolve(s.materials_csv);
                gnd = s.ground_material;
                grid = *s.grid;
            } else if (geo.empty() || width <= 0 || height <= 0) {
                throw ArgumentError("encode: --geojson, --width and --height are required without --scenario");
            }
            cmd_encode(geo, grid, enc_out, mats, gnd, enc_common.quiet ? nullptr : &std::cout);
            return kExitOk;
        }
        if (*sim) {
            Scenario s = load_scenario(sim_common.scenario);
            cmd_simulate(s, sim_common.run_options());
            return kExitOk;
        }
        if (*chain) {
            Scenario s = load_scenario(chain_common.scenario);
            if (!chain_at.empty()) {
                s.chain = parse_chain(chain_at, s.config, s.utc_offset_h);
            }
            cmd_chain(s, chain_common.run_options());
            return kExitOk;
        }
        if (*diff) {
            Scenario s = load_scenario(diff_common.scenario);
            cmd_diff(s, diff_a, diff_b, diff_common.run_options());
            return kExitOk;
        }
        if (*val) {
            sopt.threads = resolve_threads(val_threads);
            const SuiteReport rep = cmd_validate(suite, sopt, val_out, val_quiet ? nullptr : &std::cout);
            if (!rep.pass()) {
                std::cerr << "validation failed:\n";
                for (const auto& c : rep.checks) {
                    if (!c.pass) {
                        std::cerr << "  " << c.name << ": " << c.value << " (limit " << c.limit << ")\n";
                    }
                }
                return kExitTolerance;
            }
            return kExitOk;
        }
        if (*scene) {
            const SceneBundle b = builtin_scene(scene_name);
            std::filesystem::create_directories(scene_out);
            const auto base = std::filesystem::path(scene_out);
            save(b.encode().maps, (base / (b.name + ".hm25")).string());
            write_text_atomic((base / (b.name + ".geojson")).string(), footprints_to_geojson(b.footprints, b.db));
            std::ostringstream csv;
            b.db.write_csv(csv);
            write_text_atomic((base / (b.name + "_materials.csv")).string(), csv.str());
            return kExitOk;
        }
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UnknownMaterialError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const EncodeError& e) {
        std::cerr << "encode error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const FormatError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "compute failure: " << e.what() << "\n";
        return kExitCompute;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv)
{
    return run(argc, argv);
}
