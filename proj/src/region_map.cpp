// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ample/region_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "ample/error.hpp"
#include "ample/text.hpp"

namespace ample {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;
// Slack for points produced by projecting map-edge coordinates back and forth.
constexpr double kEdgeSlack = 1e-6;

struct GridHeader {
    int width = 0;
    int height = 0;
    double cell_size = 0.0;
    GeoPoint origin;
};

GridHeader take_grid_header(text::KeyValues& kv) {
    GridHeader h;
    h.width = static_cast<int>(text::parse_int(kv.take_required("width"), "width"));
    h.height = static_cast<int>(text::parse_int(kv.take_required("height"), "height"));
    h.cell_size = kv.take_double_required("cell_size_m");
    h.origin.lat = kv.take_double_required("origin_lat");
    h.origin.lon = kv.take_double_required("origin_lon");
    return h;
}

void write_grid_header(std::ostream& out, int width, int height, double cell_size, GeoPoint origin) {
    out << "width = " << width << '\n'
        << "height = " << height << '\n'
        << "cell_size_m = " << text::format_double(cell_size) << '\n'
        << "origin_lat = " << text::format_double(origin.lat) << '\n'
        << "origin_lon = " << text::format_double(origin.lon) << '\n';
}

// Reads header lines up to the `data` marker.
std::string read_header_block(std::istream& in, int& line_no) {
    std::string header;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line) == "data") return header;
        header += line;
        header += '\n';
    }
    throw Error(Errc::SchemaError, "grid file: missing 'data' marker");
}

std::vector<std::string> parse_legend(std::string_view spec) {
    std::vector<std::string> legend;
    for (auto item : text::split(spec, ',')) {
        item = text::trim(item);
        if (item.empty()) continue;
        const auto colon = item.find(':');
        if (colon == std::string_view::npos) {
            throw Error(Errc::ParseError, "legend entry must be 'code:name': '" + std::string(item) + "'");
        }
        const auto code = text::parse_int(item.substr(0, colon), "legend code");
        if (code != static_cast<std::int64_t>(legend.size()) + 1) {
            throw Error(Errc::SchemaError, "legend codes must be dense and ordered from 1");
        }
        legend.emplace_back(text::trim(item.substr(colon + 1)));
    }
    return legend;
}

}  // namespace

RegionMap::RegionMap(int width, int height, double cell_size, GeoPoint origin,
                     std::vector<std::uint8_t> cells_north_to_south, std::vector<std::string> legend)
    : width_(width),
      height_(height),
      cell_size_(cell_size),
      origin_(origin),
      cells_(std::move(cells_north_to_south)),
      legend_(std::move(legend)) {
    if (width_ <= 0 || height_ <= 0) throw Error(Errc::InvalidArgument, "map width and height must be positive");
    if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) {
        throw Error(Errc::InvalidArgument, "cell size must be positive");
    }
    if (!(origin_.lat > -90.0 && origin_.lat < 90.0)) {
        throw Error(Errc::InvalidArgument, "origin latitude must lie in (-90, 90)");
    }
    if (!(origin_.lon >= -180.0 && origin_.lon < 180.0)) {
        throw Error(Errc::InvalidArgument, "origin longitude must lie in [-180, 180)");
    }
    if (legend_.empty() || static_cast<int>(legend_.size()) > kMaxRegionCount) {
        throw Error(Errc::InvalidArgument, "legend must name between 1 and 8 region types");
    }
    if (cells_.size() != static_cast<std::size_t>(width_) * height_) {
        throw Error(Errc::InvalidArgument, "cell count does not match width x height");
    }
    const auto m = static_cast<std::uint8_t>(legend_.size());
    for (std::size_t i = 0; i < cells_.size(); ++i) {
        if (cells_[i] < 1 || cells_[i] > m) {
            throw Error(Errc::InvalidArgument, "cell " + std::to_string(i) + " holds code " +
                                                   std::to_string(cells_[i]) + " outside the legend");
        }
    }
}

std::vector<std::string> RegionMap::standard_legend() { return {"building", "open_space", "foliage", "water"}; }

std::uint8_t RegionMap::code_at(PlanarPoint p) const noexcept {
    const int ix = std::clamp(static_cast<int>(std::floor(p.x / cell_size_)), 0, width_ - 1);
    const int iy = std::clamp(static_cast<int>(std::floor(p.y / cell_size_)), 0, height_ - 1);
    return at(ix, iy);
}

bool RegionMap::contains(PlanarPoint p) const noexcept {
    return p.x >= -kEdgeSlack && p.y >= -kEdgeSlack && p.x <= extent_x() + kEdgeSlack &&
           p.y <= extent_y() + kEdgeSlack;
}

PlanarPoint RegionMap::to_planar(GeoPoint p) const {
    const double cos_lat0 = std::cos(origin_.lat * kDegToRad);
    PlanarPoint q{kEarthRadius * (p.lon - origin_.lon) * kDegToRad * cos_lat0,
                  kEarthRadius * (p.lat - origin_.lat) * kDegToRad};
    if (!std::isfinite(q.x) || !std::isfinite(q.y) || !contains(q)) {
        throw Error(Errc::OutOfBounds, "point (" + text::format_double(p.lat) + ", " + text::format_double(p.lon) +
                                           ") lies outside the map");
    }
    q.x = std::clamp(q.x, 0.0, extent_x());
    q.y = std::clamp(q.y, 0.0, extent_y());
    return q;
}

GeoPoint RegionMap::to_geo(PlanarPoint p) const noexcept {
    const double cos_lat0 = std::cos(origin_.lat * kDegToRad);
    return {origin_.lat + p.y / kEarthRadius / kDegToRad, origin_.lon + p.x / (kEarthRadius * cos_lat0) / kDegToRad};
}

PlanarPoint geo_to_grid(const RegionMap& map, GeoPoint p) { return map.to_planar(p); }

RegionMap read_region_map(std::istream& in) {
    int line_no = 0;
    auto kv = text::KeyValues::parse(read_header_block(in, line_no), "region map header");
    const GridHeader h = take_grid_header(kv);
    auto legend = parse_legend(kv.take_required("legend"));
    kv.reject_unknown();
    if (h.width <= 0 || h.height <= 0) throw Error(Errc::SchemaError, "region map: width and height must be positive");
    if (legend.empty() || static_cast<int>(legend.size()) > kMaxRegionCount) {
        throw Error(Errc::SchemaError, "region map: legend must name 1..8 region types");
    }

    const std::size_t count = static_cast<std::size_t>(h.width) * h.height;
    std::vector<std::uint8_t> cells;
    cells.reserve(count);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream row(line);
        std::string token;
        while (row >> token) {
            if (cells.size() == count) {
                throw Error(Errc::ParseError, "region map line " + std::to_string(line_no) + ": more cells than width x height");
            }
            const auto code = text::parse_int(token, "region map line " + std::to_string(line_no));
            if (code < 1 || code > static_cast<std::int64_t>(legend.size())) {
                throw Error(Errc::ParseError, "region map line " + std::to_string(line_no) + ": unknown region code " +
                                                  std::string(token));
            }
            cells.push_back(static_cast<std::uint8_t>(code));
        }
    }
    if (cells.size() != count) {
        throw Error(Errc::ParseError, "region map: expected " + std::to_string(count) + " cells, found " +
                                          std::to_string(cells.size()));
    }
    return RegionMap(h.width, h.height, h.cell_size, h.origin, std::move(cells), std::move(legend));
}

RegionMap load_region_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::Io, "cannot open region map '" + path.string() + "'");
    return read_region_map(in);
}

void write_region_map(std::ostream& out, const RegionMap& map) {
    out << "# region map: rows north to south, codes per legend\n";
    write_grid_header(out, map.width(), map.height(), map.cell_size(), map.origin());
    out << "legend = ";
    for (std::size_t i = 0; i < map.legend().size(); ++i) {
        if (i) out << ", ";
        out << (i + 1) << ':' << map.legend()[i];
    }
    out << "\ndata\n";
    const auto cells = map.cells();
    for (int row = 0; row < map.height(); ++row) {
        for (int col = 0; col < map.width(); ++col) {
            if (col) out << ' ';
            out << static_cast<int>(cells[static_cast<std::size_t>(row) * map.width() + col]);
        }
        out << '\n';
    }
}

void save_region_map(const std::filesystem::path& path, const RegionMap& map) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::Io, "cannot write region map '" + path.string() + "'");
    write_region_map(out, map);
}

void write_value_grid(std::ostream& out, const ValueGrid& grid, std::string_view units) {
    out << "# value grid: rows north to south\n";
    write_grid_header(out, grid.width, grid.height, grid.cell_size, grid.origin);
    out << "nodata = " << text::format_double(grid.nodata) << '\n';
    out << "units = " << units << '\n';
    out << "data\n";
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            if (col) out << ' ';
            out << text::format_double(grid.values[static_cast<std::size_t>(row) * grid.width + col]);
        }
        out << '\n';
    }
}

ValueGrid read_value_grid(std::istream& in) {
    int line_no = 0;
    auto kv = text::KeyValues::parse(read_header_block(in, line_no), "value grid header");
    const GridHeader h = take_grid_header(kv);
    ValueGrid grid;
    grid.width = h.width;
    grid.height = h.height;
    grid.cell_size = h.cell_size;
    grid.origin = h.origin;
    grid.nodata = kv.take_double_required("nodata");
    kv.take("units");
    kv.reject_unknown();
    std::string token;
    while (in >> token) grid.values.push_back(text::parse_double(token, "value grid cell"));
    if (grid.values.size() != static_cast<std::size_t>(grid.width) * grid.height) {
        throw Error(Errc::ParseError, "value grid: cell count does not match header");
    }
    return grid;
}

}  // namespace ample
