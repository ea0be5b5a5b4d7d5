// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ample/dataio.hpp"
#include "ample/models.hpp"
#include "ample/region_map.hpp"

namespace ample::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNotConverged = 3 };

/// Raised for invalid option combinations; maps to kUsage.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Rewrites argv so that entries from a `--config FILE` key = value file
/// follow the command-line arguments. Each key is a long option name; a
/// value of `true` becomes a bare flag and `false` drops the key.
std::vector<std::string> expand_config(int argc, char** argv);

/// Options shared by every data-consuming subcommand.
struct DataOptions {
    std::string dataset;
    std::string map;
    std::string tag;          // city filter, empty for all
    std::string visibility = "all";
    double d0 = kDefaultCloseInDistance;
    double max_path_loss = 150.0;
    double min_distance = 0.0;
    double max_distance = 0.0;  // 0 means unbounded
    double bin = 5.0;
    std::vector<double> freqs;
    bool average = false;
};

struct Prepared {
    RawDataset raw;
    std::optional<RegionMap> map;
    std::optional<ClassifyReport> report;
    std::size_t loaded = 0;
};

/// Load, tag filter, value filter, classify against the map, visibility filter.
Prepared prepare(const DataOptions& opt);

std::filesystem::path output_path(const std::string& dir, const std::string& explicit_path, const std::string& name);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace ample::cli
