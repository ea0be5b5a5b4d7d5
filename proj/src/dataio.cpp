// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ample/dataio.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <tuple>

#include "ample/error.hpp"
#include "ample/text.hpp"

namespace ample {

namespace {

enum Column { TxLat, TxLon, RxLat, RxLon, Dist, Freq, Loss, City, Los, kColumnCount };

constexpr std::array<std::string_view, kColumnCount> kColumnNames = {
    "tx_lat", "tx_lon", "rx_lat", "rx_lon", "distance3d_m", "freq_ghz", "path_loss_db", "city", "los"};

constexpr int kRequiredColumns = Loss + 1;

std::string row_context(std::string_view source, std::size_t row) {
    return std::string(source) + " row " + std::to_string(row);
}

Visibility parse_los(std::string_view s, const std::string& where) {
    if (s == "LOS" || s == "los" || s == "1") return Visibility::Los;
    if (s == "NLOS" || s == "nlos" || s == "0") return Visibility::Nlos;
    throw Error(Errc::ParseError, where + ": los must be LOS or NLOS, got '" + std::string(s) + "'");
}

}  // namespace

RawDataset read_dataset(std::istream& in, std::string_view source) {
    RawDataset data;
    data.source = std::string(source);

    std::string line;
    bool have_header = false;
    while (!have_header && std::getline(in, line)) have_header = !text::trim(line).empty();
    if (!have_header) throw Error(Errc::SchemaError, std::string(source) + ": empty dataset file");

    std::array<int, kColumnCount> where{};
    where.fill(-1);
    const auto header = text::split(text::trim(line), ',');
    for (std::size_t i = 0; i < header.size(); ++i) {
        const auto name = text::trim(header[i]);
        const auto it = std::find(kColumnNames.begin(), kColumnNames.end(), name);
        if (it == kColumnNames.end()) {
            throw Error(Errc::SchemaError, std::string(source) + ": unknown column '" + std::string(name) + "'");
        }
        auto& slot = where[static_cast<std::size_t>(it - kColumnNames.begin())];
        if (slot != -1) throw Error(Errc::SchemaError, std::string(source) + ": duplicate column '" + std::string(name) + "'");
        slot = static_cast<int>(i);
    }
    for (int c = 0; c < kRequiredColumns; ++c) {
        if (where[c] == -1) {
            throw Error(Errc::SchemaError,
                        std::string(source) + ": missing required column '" + std::string(kColumnNames[c]) + "'");
        }
    }

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (text::trim(line).empty()) continue;
        const std::string ctx = row_context(source, row);
        const auto fields = text::split(line, ',');
        if (fields.size() != header.size()) {
            throw Error(Errc::ParseError, ctx + ": expected " + std::to_string(header.size()) + " fields, found " +
                                              std::to_string(fields.size()));
        }
        auto num = [&](Column c) { return text::parse_double(fields[where[c]], ctx + " " + std::string(kColumnNames[c])); };
        SamplePoint p;
        p.tx = {num(TxLat), num(TxLon)};
        p.rx = {num(RxLat), num(RxLon)};
        p.distance3d = num(Dist);
        p.freq_ghz = num(Freq);
        p.path_loss = num(Loss);
        if (!(p.distance3d > 0.0) || !std::isfinite(p.distance3d)) {
            throw Error(Errc::ParseError, ctx + ": distance3d_m must be positive");
        }
        if (!(p.freq_ghz > 0.0) || !std::isfinite(p.freq_ghz)) {
            throw Error(Errc::ParseError, ctx + ": freq_ghz must be positive");
        }
        if (!std::isfinite(p.path_loss)) throw Error(Errc::ParseError, ctx + ": path_loss_db must be finite");
        if (where[City] != -1) p.city = std::string(text::trim(fields[where[City]]));
        if (where[Los] != -1) {
            const auto v = text::trim(fields[where[Los]]);
            if (!v.empty()) p.los = parse_los(v, ctx);
        }
        data.points.push_back(std::move(p));
    }
    return data;
}

RawDataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open dataset '" + path.string() + "'");
    return read_dataset(in, path.string());
}

void write_dataset(std::ostream& out, const RawDataset& data) {
    const bool with_city = std::any_of(data.points.begin(), data.points.end(), [](const auto& p) { return !p.city.empty(); });
    const bool with_los = std::any_of(data.points.begin(), data.points.end(), [](const auto& p) { return p.los.has_value(); });
    out << "tx_lat,tx_lon,rx_lat,rx_lon,distance3d_m,freq_ghz,path_loss_db";
    if (with_city) out << ",city";
    if (with_los) out << ",los";
    out << '\n';
    using text::format_double;
    for (const auto& p : data.points) {
        out << format_double(p.tx.lat) << ',' << format_double(p.tx.lon) << ',' << format_double(p.rx.lat) << ','
            << format_double(p.rx.lon) << ',' << format_double(p.distance3d) << ',' << format_double(p.freq_ghz) << ','
            << format_double(p.path_loss);
        if (with_city) out << ',' << p.city;
        if (with_los) out << ',' << (p.los ? (*p.los == Visibility::Los ? "LOS" : "NLOS") : "");
        out << '\n';
    }
}

void save_dataset(const std::filesystem::path& path, const RawDataset& data) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write dataset '" + path.string() + "'");
    write_dataset(out, data);
}

// ---------------------------------------------------------------------------

void FilterSpec::validate() const {
    if (!(max_path_loss > 0.0)) throw Error(Errc::InvalidArgument, "max path loss must be positive");
    if (!(min_distance < max_distance)) throw Error(Errc::InvalidArgument, "distance range is empty");
    if (!(distance_bin > 0.0)) throw Error(Errc::InvalidArgument, "distance bin must be positive");
}

RawDataset filter_dataset(const RawDataset& data, const FilterSpec& spec) {
    spec.validate();
    RawDataset out;
    out.source = data.source;
    for (const auto& p : data.points) {
        if (p.path_loss > spec.max_path_loss) continue;
        if (p.distance3d < spec.min_distance || p.distance3d > spec.max_distance) continue;
        if (!spec.frequency_whitelist.empty() &&
            std::none_of(spec.frequency_whitelist.begin(), spec.frequency_whitelist.end(),
                         [&](double f) { return std::fabs(f - p.freq_ghz) <= 1e-9 * std::max(1.0, f); })) {
            continue;
        }
        SamplePoint q = p;
        q.distance_bin = static_cast<int>(std::floor(p.distance3d / spec.distance_bin));
        out.points.push_back(std::move(q));
    }
    if (!spec.average_bins) return out;

    // Averaging mode: the first member of each cell keeps its geometry and
    // takes the cell's mean path loss.
    std::map<std::tuple<std::string, int, double>, std::pair<std::size_t, std::vector<std::size_t>>> cells;
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < out.points.size(); ++i) {
        const auto& p = out.points[i];
        auto [it, inserted] = cells.try_emplace({p.city, p.distance_bin, p.freq_ghz});
        if (inserted) {
            it->second.first = i;
            order.push_back(i);
        }
        it->second.second.push_back(i);
    }
    RawDataset averaged;
    averaged.source = out.source;
    for (std::size_t first : order) {
        const auto& p = out.points[first];
        const auto& members = cells.at({p.city, p.distance_bin, p.freq_ghz}).second;
        double sum = 0.0;
        for (std::size_t m : members) sum += out.points[m].path_loss;
        SamplePoint q = p;
        q.path_loss = members.size() == 1 ? p.path_loss : sum / static_cast<double>(members.size());
        averaged.points.push_back(std::move(q));
    }
    return averaged;
}

std::pair<RawDataset, RawDataset> split_extraction_validation(const RawDataset& data, std::string_view extraction_tag,
                                                              std::string_view validation_tag) {
    if (extraction_tag == validation_tag) throw Error(Errc::InvalidArgument, "extraction and validation tags coincide");
    std::pair<RawDataset, RawDataset> out;
    out.first.source = data.source + "#" + std::string(extraction_tag);
    out.second.source = data.source + "#" + std::string(validation_tag);
    for (const auto& p : data.points) {
        if (p.city == extraction_tag) {
            out.first.points.push_back(p);
        } else if (p.city == validation_tag) {
            out.second.points.push_back(p);
        } else {
            throw Error(Errc::UnknownTag, "point tagged '" + p.city + "' belongs to neither split");
        }
    }
    if (out.first.empty()) throw Error(Errc::UnknownTag, "tag '" + std::string(extraction_tag) + "' not present");
    if (out.second.empty()) throw Error(Errc::UnknownTag, "tag '" + std::string(validation_tag) + "' not present");
    return out;
}

ClassifyReport classify_dataset(RawDataset& data, const RegionMap& map, double d0) {
    ClassifyReport report;
    for (std::size_t i = 0; i < data.points.size(); ++i) {
        auto& p = data.points[i];
        const PlanarPoint tx = map.to_planar(p.tx);
        const PlanarPoint rx = map.to_planar(p.rx);
        const Visibility v = classify_los(map, tx, rx);
        if (p.los && *p.los != v) {
            ++report.mismatches;
            if (report.warnings.size() < 20) {
                report.warnings.push_back("row " + std::to_string(i + 1) + ": file says " +
                                          (*p.los == Visibility::Los ? "LOS" : "NLOS") + ", map says " +
                                          (v == Visibility::Los ? "LOS" : "NLOS"));
            }
        }
        p.los = v;
        (v == Visibility::Los ? report.los : report.nlos) += 1;
        p.line = trace_line(map, tx, rx, d0);
        if (p.line->rx_indoor) ++report.rx_indoor;
    }
    if (report.mismatches > report.warnings.size()) {
        report.warnings.push_back(std::to_string(report.mismatches - report.warnings.size()) +
                                  " further LOS mismatches not listed");
    }
    return report;
}

FitBuild to_fit_dataset(const RawDataset& data, ModelKind kind, const RegionMap* map, double d0) {
    switch (kind) {
        case ModelKind::Ample: {
            if (map == nullptr) throw Error(Errc::InvalidArgument, "the AMPLE model needs a region map");
            FitBuild build{FitDataset::ample(map->region_count()), {}, 0};
            for (std::size_t i = 0; i < data.points.size(); ++i) {
                const auto& p = data.points[i];
                const bool cached = p.line && p.line->close_in_distance() == d0;
                const LineMatrix line = cached ? *p.line : trace_line(*map, p.tx, p.rx, d0);
                if (line.rx_indoor) {
                    ++build.skipped_indoor;
                    continue;
                }
                build.data.add_ample(line, p.freq_ghz, p.path_loss);
                build.kept.push_back(i);
            }
            return build;
        }
        case ModelKind::Ci: {
            FitBuild build{FitDataset::ci(d0), {}, 0};
            for (std::size_t i = 0; i < data.points.size(); ++i) {
                const auto& p = data.points[i];
                build.data.add_ci(p.freq_ghz, p.distance3d, p.path_loss);
                build.kept.push_back(i);
            }
            return build;
        }
        case ModelKind::Abg: {
            FitBuild build{FitDataset::abg(), {}, 0};
            for (std::size_t i = 0; i < data.points.size(); ++i) {
                const auto& p = data.points[i];
                build.data.add_abg(p.freq_ghz, p.distance3d, p.path_loss);
                build.kept.push_back(i);
            }
            return build;
        }
    }
    throw Error(Errc::InvalidArgument, "unknown model kind");
}

}  // namespace ample
