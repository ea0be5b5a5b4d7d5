// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ample/dataio.hpp"
#include "ample/models.hpp"
#include "ample/region_map.hpp"

namespace ample {

/// City-block map generator. Streets run along the first `street_width`
/// cells of every `block_size` period in both axes; buildings fill lots
/// inside blocks until the requested building fraction is met exactly;
/// foliage and water patches are discs stamped over the layout.
struct MapRecipe {
    int width = 200;  // cells
    int height = 200;
    double cell_size = 5.0;  // m
    GeoPoint origin{53.38, -1.47};
    int block_size = 20;  // cells
    int street_width = 3;
    int lot_size = 4;
    double building_fill = 0.4;  // fraction of all cells
    int foliage_patches = 6;
    int water_patches = 2;
    int patch_radius = 8;  // cells

    void validate() const;
};

RegionMap generate_map(const MapRecipe& recipe, std::uint64_t seed);

struct SynthSpec {
    MapRecipe recipe;
    std::optional<RegionMap> map;  // overrides the recipe when set
    std::optional<GeoPoint> tx;    // default: map centre
    double tx_height = 30.0;       // m
    double rx_height = 1.5;
    double rx_resolution = 5.0;  // m between receivers
    std::vector<double> frequencies{0.85, 2.1, 5.0};
    ModelParams true_params = ample_table_preset(Scenario::UMa, Environment::Nlos);
    std::uint64_t seed = 1;
    double d0 = kDefaultCloseInDistance;
    std::string city;

    void validate() const;
};

struct SkipReport {
    std::size_t rx_indoor = 0;
    std::size_t too_close = 0;  // ground distance not beyond d0

    std::size_t total() const noexcept { return rx_indoor + too_close; }
};

struct SynthOutput {
    RegionMap map;
    RawDataset data;
    SkipReport skips;
    std::size_t grid_points = 0;
};

/// Receivers sit at the centres of a rx_resolution grid; each receiver and
/// frequency yields one link with an independent shadowing stream.
SynthOutput generate_dataset(const SynthSpec& spec);

/// Parses a recipe file. `base` resolves relative preset and map paths.
SynthSpec read_synth_recipe(std::istream& in, std::string_view source, const std::filesystem::path& base);

void write_manifest(std::ostream& out, const SynthSpec& spec, const SynthOutput& output, std::uint64_t spec_hash);

}  // namespace ample
