// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ample/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ample/error.hpp"
#include "ample/text.hpp"

namespace ample {

namespace {

constexpr auto kBuilding = code_value(RegionCode::Building);
constexpr auto kOpen = code_value(RegionCode::OpenSpace);
constexpr auto kFoliage = code_value(RegionCode::Foliage);
constexpr auto kWater = code_value(RegionCode::Water);

// Stream ids keep map layout and link noise independent under one seed.
constexpr std::uint64_t kMapStream = 0x6d6170ULL;
constexpr std::uint64_t kLinkStreamBase = 1ULL << 32;

int uniform_int(Rng& rng, int lo, int hi) {  // inclusive
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(rng() % span);
}

struct Lot {
    int x0, y0, x1, y1;  // half-open, grid coordinates (row 0 = north)
};

}  // namespace

void MapRecipe::validate() const {
    auto fail = [](const std::string& what) { throw Error(Errc::InvalidRecipe, what); };
    if (width <= 0 || height <= 0) fail("width and height must be positive");
    if (!(cell_size > 0.0)) fail("cell size must be positive");
    if (block_size < 2) fail("block size must be at least 2 cells");
    if (street_width < 0 || street_width >= block_size) fail("street width must lie in [0, block size)");
    if (lot_size < 1) fail("lot size must be positive");
    if (!(building_fill >= 0.0 && building_fill <= 1.0)) fail("building fill must lie in [0, 1]");
    if (foliage_patches < 0 || water_patches < 0) fail("patch counts must be non-negative");
    if (patch_radius < 1) fail("patch radius must be at least one cell");
}

RegionMap generate_map(const MapRecipe& recipe, std::uint64_t seed) {
    recipe.validate();
    Rng rng = Rng::for_stream(seed, kMapStream);
    const int w = recipe.width;
    const int h = recipe.height;
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(w) * h, kOpen);
    auto at = [&](int x, int row) -> std::uint8_t& { return cells[static_cast<std::size_t>(row) * w + x]; };

    auto stamp = [&](std::uint8_t code, int count) {
        for (int i = 0; i < count; ++i) {
            const int cx = uniform_int(rng, 0, w - 1);
            const int cy = uniform_int(rng, 0, h - 1);
            const int r = uniform_int(rng, std::max(1, recipe.patch_radius / 2), recipe.patch_radius);
            for (int row = std::max(0, cy - r); row <= std::min(h - 1, cy + r); ++row) {
                for (int x = std::max(0, cx - r); x <= std::min(w - 1, cx + r); ++x) {
                    if ((x - cx) * (x - cx) + (row - cy) * (row - cy) <= r * r) at(x, row) = code;
                }
            }
        }
    };
    stamp(kFoliage, recipe.foliage_patches);
    stamp(kWater, recipe.water_patches);

    const int b = recipe.block_size;
    const int s = recipe.street_width;
    auto in_block = [&](int x, int row) { return x % b >= s && row % b >= s; };

    std::vector<Lot> lots;
    for (int by = 0; by < h; by += b) {
        for (int bx = 0; bx < w; bx += b) {
            const int x_end = std::min(bx + b, w);
            const int y_end = std::min(by + b, h);
            for (int ly = by + s; ly < y_end; ly += recipe.lot_size) {
                for (int lx = bx + s; lx < x_end; lx += recipe.lot_size) {
                    lots.push_back({lx, ly, std::min(lx + recipe.lot_size, x_end), std::min(ly + recipe.lot_size, y_end)});
                }
            }
        }
    }
    for (std::size_t i = lots.size(); i > 1; --i) std::swap(lots[i - 1], lots[rng() % i]);

    std::size_t buildable = 0;
    for (int row = 0; row < h; ++row) {
        for (int x = 0; x < w; ++x) buildable += (in_block(x, row) && at(x, row) == kOpen) ? 1 : 0;
    }
    auto remaining = static_cast<std::size_t>(std::llround(recipe.building_fill * static_cast<double>(cells.size())));
    if (remaining > buildable) {
        throw Error(Errc::InvalidRecipe, "building fill needs " + std::to_string(remaining) + " cells but blocks offer " +
                                             std::to_string(buildable));
    }
    for (const auto& lot : lots) {
        for (int row = lot.y0; row < lot.y1 && remaining > 0; ++row) {
            for (int x = lot.x0; x < lot.x1 && remaining > 0; ++x) {
                if (at(x, row) == kOpen) {
                    at(x, row) = kBuilding;
                    --remaining;
                }
            }
        }
        if (remaining == 0) break;
    }
    return RegionMap(w, h, recipe.cell_size, recipe.origin, std::move(cells), RegionMap::standard_legend());
}

// ---------------------------------------------------------------------------

void SynthSpec::validate() const {
    if (!(rx_resolution > 0.0)) throw Error(Errc::InvalidRecipe, "receiver resolution must be positive");
    if (frequencies.empty()) throw Error(Errc::InvalidRecipe, "frequency list is empty");
    for (double f : frequencies) {
        if (!(f > 0.0)) throw Error(Errc::InvalidRecipe, "frequencies must be positive");
    }
    if (!(d0 > 0.0)) throw Error(Errc::InvalidRecipe, "d0 must be positive");
    if (!(tx_height >= 0.0) || !(rx_height >= 0.0)) throw Error(Errc::InvalidRecipe, "antenna heights must be non-negative");
    if (!(sigma_of(true_params) >= 0.0)) throw Error(Errc::InvalidRecipe, "sigma must be non-negative");
}

SynthOutput generate_dataset(const SynthSpec& spec) {
    spec.validate();
    SynthOutput out{spec.map ? *spec.map : generate_map(spec.recipe, spec.seed), {}, {}, 0};
    const RegionMap& map = out.map;
    if (const auto* a = std::get_if<AmpleParams>(&spec.true_params); a && a->region_count() != map.region_count()) {
        throw Error(Errc::RegionCountMismatch, "parameters have " + std::to_string(a->region_count()) +
                                                   " exponents, map legend has " + std::to_string(map.region_count()));
    }
    const GeoPoint tx_geo = spec.tx ? *spec.tx : map.to_geo({map.extent_x() / 2.0, map.extent_y() / 2.0});
    const PlanarPoint tx = map.to_planar(tx_geo);
    const double sigma = sigma_of(spec.true_params);
    const double dh = spec.tx_height - spec.rx_height;

    const auto nx = static_cast<std::size_t>(std::floor(map.extent_x() / spec.rx_resolution));
    const auto ny = static_cast<std::size_t>(std::floor(map.extent_y() / spec.rx_resolution));
    out.grid_points = nx * ny;
    out.data.source = "synthetic";
    const std::size_t nf = spec.frequencies.size();

    for (std::size_t iy = 0; iy < ny; ++iy) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const PlanarPoint rx{(static_cast<double>(ix) + 0.5) * spec.rx_resolution,
                                 (static_cast<double>(iy) + 0.5) * spec.rx_resolution};
            const double ground = std::hypot(rx.x - tx.x, rx.y - tx.y);
            if (!(ground > spec.d0)) {
                out.skips.too_close += nf;
                continue;
            }
            const LineMatrix line = trace_line(map, tx, rx, spec.d0);
            if (line.rx_indoor) {
                out.skips.rx_indoor += nf;
                continue;
            }
            const Visibility los = classify_los(map, tx, rx);
            const double d3 = std::hypot(ground, dh);
            const GeoPoint rx_geo = map.to_geo(rx);
            for (std::size_t fi = 0; fi < nf; ++fi) {
                const double f = spec.frequencies[fi];
                const double mean = std::visit(
                    [&](const auto& p) {
                        using T = std::decay_t<decltype(p)>;
                        if constexpr (std::is_same_v<T, AmpleParams>) {
                            return predict_ample(p, line, f);
                        } else if constexpr (std::is_same_v<T, CiParams>) {
                            return predict_ci(p, f, d3);
                        } else {
                            return predict_abg(p, f, d3);
                        }
                    },
                    spec.true_params);
                Rng rng = Rng::for_stream(spec.seed, kLinkStreamBase + (iy * nx + ix) * nf + fi);
                SamplePoint p;
                p.tx = tx_geo;
                p.rx = rx_geo;
                p.distance3d = d3;
                p.freq_ghz = f;
                p.path_loss = mean + sample_shadowing(sigma, rng);
                p.los = los;
                p.city = spec.city;
                p.line = line;
                out.data.points.push_back(std::move(p));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

SynthSpec read_synth_recipe(std::istream& in, std::string_view source, const std::filesystem::path& base) {
    auto kv = text::KeyValues::parse(in, source);
    SynthSpec spec;
    auto int_key = [&](std::string_view key, int& slot) {
        if (auto v = kv.take(key)) slot = static_cast<int>(text::parse_int(*v, std::string(source) + ": " + std::string(key)));
    };
    auto dbl_key = [&](std::string_view key, double& slot) {
        if (auto v = kv.take_double(key)) slot = *v;
    };

    auto resolve = [&](const std::string& p) {
        const std::filesystem::path path(p);
        return path.is_absolute() ? path : base / path;
    };

    if (auto map_file = kv.take("map_file")) {
        spec.map = load_region_map(resolve(*map_file));
    }
    MapRecipe& r = spec.recipe;
    int_key("width", r.width);
    int_key("height", r.height);
    dbl_key("cell_size_m", r.cell_size);
    dbl_key("origin_lat", r.origin.lat);
    dbl_key("origin_lon", r.origin.lon);
    int_key("block_size_cells", r.block_size);
    int_key("street_width_cells", r.street_width);
    int_key("lot_size_cells", r.lot_size);
    dbl_key("building_fill", r.building_fill);
    int_key("foliage_patches", r.foliage_patches);
    int_key("water_patches", r.water_patches);
    int_key("patch_radius_cells", r.patch_radius);

    if (auto scenario = kv.take("scenario")) {
        spec.tx_height = parse_scenario(*scenario) == Scenario::UMa ? 30.0 : 15.0;
    }
    dbl_key("tx_height_m", spec.tx_height);
    dbl_key("rx_height_m", spec.rx_height);
    const auto tx_lat = kv.take_double("tx_lat");
    const auto tx_lon = kv.take_double("tx_lon");
    if (tx_lat.has_value() != tx_lon.has_value()) {
        throw Error(Errc::InvalidRecipe, std::string(source) + ": tx_lat and tx_lon go together");
    }
    if (tx_lat) spec.tx = GeoPoint{*tx_lat, *tx_lon};
    dbl_key("rx_resolution_m", spec.rx_resolution);
    if (auto f = kv.take("frequencies_ghz")) spec.frequencies = text::parse_double_list(*f, "frequencies_ghz");
    dbl_key("d0_m", spec.d0);
    if (auto s = kv.take("seed")) {
        const auto v = text::parse_int(*s, std::string(source) + ": seed");
        if (v < 0) throw Error(Errc::InvalidRecipe, std::string(source) + ": seed must be non-negative");
        spec.seed = static_cast<std::uint64_t>(v);
    }
    if (auto city = kv.take("city")) spec.city = *city;
    spec.true_params = load_preset(resolve(kv.take_required("preset"))).params;
    if (auto s = kv.take_double("sigma_override")) {
        std::visit([&](auto& p) { p.sigma = *s; }, spec.true_params);
    }
    kv.reject_unknown();
    spec.validate();
    if (!spec.map) spec.recipe.validate();
    return spec;
}

void write_manifest(std::ostream& out, const SynthSpec& spec, const SynthOutput& output, std::uint64_t spec_hash) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(spec_hash));
    out << "seed = " << spec.seed << '\n'
        << "spec_hash = " << hash << '\n'
        << "model = " << to_string(kind_of(spec.true_params)) << '\n'
        << "grid_points = " << output.grid_points << '\n'
        << "frequencies = " << spec.frequencies.size() << '\n'
        << "emitted = " << output.data.size() << '\n'
        << "skipped_rx_indoor = " << output.skips.rx_indoor << '\n'
        << "skipped_too_close = " << output.skips.too_close << '\n'
        << "skipped_total = " << output.skips.total() << '\n';
}

}  // namespace ample
