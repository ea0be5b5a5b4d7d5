// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "cli_support.hpp"

#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include "ample/error.hpp"
#include "ample/text.hpp"

namespace ample::cli {

namespace {

std::vector<std::string> config_arguments(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    std::vector<std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto body = text::trim(std::string_view(line).substr(0, line.find('#')));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
        }
        const auto key = text::trim(body.substr(0, eq));
        const auto value = text::trim(body.substr(eq + 1));
        if (key.empty()) throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
        if (value == "false") continue;
        out.push_back("--" + std::string(key));
        if (value != "true") out.emplace_back(value);
    }
    return out;
}

}  // namespace

std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args;
    std::vector<std::string> extra;
    for (int i = 0; i < argc; ++i) {
        const std::string_view a(argv[i]);
        if (a == "--config") {
            if (i + 1 >= argc) throw UsageError("--config needs a file");
            auto more = config_arguments(argv[++i]);
            extra.insert(extra.end(), more.begin(), more.end());
        } else if (a.starts_with("--config=")) {
            auto more = config_arguments(std::string(a.substr(9)));
            extra.insert(extra.end(), more.begin(), more.end());
        } else {
            args.emplace_back(a);
        }
    }
    args.insert(args.end(), extra.begin(), extra.end());
    return args;
}

Prepared prepare(const DataOptions& opt) {
    Prepared out;
    out.raw = load_dataset(opt.dataset);
    out.loaded = out.raw.size();
    if (!opt.tag.empty()) {
        RawDataset tagged;
        tagged.source = out.raw.source;
        for (auto& p : out.raw.points) {
            if (p.city == opt.tag) tagged.points.push_back(std::move(p));
        }
        out.raw = std::move(tagged);
    }
    FilterSpec spec;
    spec.max_path_loss = opt.max_path_loss;
    spec.min_distance = opt.min_distance;
    spec.max_distance = opt.max_distance > 0.0 ? opt.max_distance : std::numeric_limits<double>::infinity();
    spec.distance_bin = opt.bin;
    spec.frequency_whitelist = opt.freqs;
    spec.average_bins = opt.average;
    out.raw = filter_dataset(out.raw, spec);

    if (!opt.map.empty()) {
        out.map = load_region_map(opt.map);
        out.report = classify_dataset(out.raw, *out.map, opt.d0);
    }
    if (opt.visibility != "all") {
        const Visibility want = parse_environment(opt.visibility) == Environment::Los ? Visibility::Los : Visibility::Nlos;
        RawDataset kept;
        kept.source = out.raw.source;
        for (auto& p : out.raw.points) {
            if (!p.los) throw Error(Errc::SchemaError, "visibility filter needs los flags or a map");
            if (*p.los == want) kept.points.push_back(std::move(p));
        }
        out.raw = std::move(kept);
    }
    if (out.raw.empty()) throw Error(Errc::EmptyDataset, "no points left after filtering");
    return out;
}

std::filesystem::path output_path(const std::string& dir, const std::string& explicit_path, const std::string& name) {
    if (!explicit_path.empty()) return explicit_path;
    return std::filesystem::path(dir) / name;
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::Io, "cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error(Errc::Io, "write failed for '" + path.string() + "'");
}

}  // namespace ample::cli
