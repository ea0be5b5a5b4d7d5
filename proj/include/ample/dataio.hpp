// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ample/fitting.hpp"
#include "ample/line_matrix.hpp"
#include "ample/region_map.hpp"

namespace ample {

struct SamplePoint {
    GeoPoint tx;
    GeoPoint rx;
    double distance3d = 0.0;  // m
    double freq_ghz = 0.0;
    double path_loss = 0.0;  // dB
    std::optional<Visibility> los;
    std::string city;
    int distance_bin = -1;  // set by filter_dataset
    std::optional<LineMatrix> line;
};

struct RawDataset {
    std::vector<SamplePoint> points;
    std::string source;

    std::size_t size() const noexcept { return points.size(); }
    bool empty() const noexcept { return points.empty(); }
};

// CSV with a header row. Required columns:
//   tx_lat, tx_lon, rx_lat, rx_lon, distance3d_m, freq_ghz, path_loss_db
// Optional: city, los (LOS/NLOS). Column order is free.
RawDataset read_dataset(std::istream& in, std::string_view source);
RawDataset load_dataset(const std::filesystem::path& path);
void write_dataset(std::ostream& out, const RawDataset& data);
void save_dataset(const std::filesystem::path& path, const RawDataset& data);

struct FilterSpec {
    double max_path_loss = 150.0;
    double min_distance = 0.0;
    double max_distance = std::numeric_limits<double>::infinity();
    double distance_bin = 5.0;
    std::vector<double> frequency_whitelist;  // empty admits every frequency
    bool average_bins = false;                // one point per (city, bin, frequency)

    void validate() const;
};

RawDataset filter_dataset(const RawDataset& data, const FilterSpec& spec);

/// Partition by city tag. Both tags must occur; any third tag is an error.
std::pair<RawDataset, RawDataset> split_extraction_validation(const RawDataset& data, std::string_view extraction_tag,
                                                              std::string_view validation_tag);

struct ClassifyReport {
    std::size_t los = 0;
    std::size_t nlos = 0;
    std::size_t mismatches = 0;  // file flag disagreed with the map
    std::size_t rx_indoor = 0;
    std::vector<std::string> warnings;
};

/// Recomputes LOS flags from the map and caches each link's line matrix.
ClassifyReport classify_dataset(RawDataset& data, const RegionMap& map, double d0 = kDefaultCloseInDistance);

struct FitBuild {
    FitDataset data;
    std::vector<std::size_t> kept;  // source index of each fit row
    std::size_t skipped_indoor = 0;
};

/// Feature rows for one model family. AMPLE needs the map and drops links
/// whose receiver stands inside a building.
FitBuild to_fit_dataset(const RawDataset& data, ModelKind kind, const RegionMap* map,
                        double d0 = kDefaultCloseInDistance);

}  // namespace ample
