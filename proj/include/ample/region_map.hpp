// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ample {

/// Region type codes. Codes in a map are dense 1..M; the four named
/// values are the standard legend, and code 1 is always the building type
/// (penetrations are counted against it).
enum class RegionCode : std::uint8_t {
    Building = 1,
    OpenSpace = 2,
    Foliage = 3,
    Water = 4,
};

inline constexpr int kStandardRegionCount = 4;
inline constexpr int kMaxRegionCount = 8;
inline constexpr double kEarthRadius = 6'371'000.0;

inline constexpr std::uint8_t code_value(RegionCode c) noexcept { return static_cast<std::uint8_t>(c); }

struct GeoPoint {
    double lat = 0.0;  // degrees
    double lon = 0.0;  // degrees

    bool operator==(const GeoPoint&) const = default;
};

/// Local planar coordinates in meters: x east, y north of the map origin.
struct PlanarPoint {
    double x = 0.0;
    double y = 0.0;
};

/// Immutable geo-referenced grid of region codes. Rows are stored
/// north-to-south (file order); `at(ix, iy)` addresses with iy counted
/// from the southern edge so that planar y grows with the row index.
class RegionMap {
public:
    RegionMap(int width, int height, double cell_size, GeoPoint origin,
              std::vector<std::uint8_t> cells_north_to_south, std::vector<std::string> legend);

    static std::vector<std::string> standard_legend();

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    double cell_size() const noexcept { return cell_size_; }
    GeoPoint origin() const noexcept { return origin_; }
    double extent_x() const noexcept { return width_ * cell_size_; }
    double extent_y() const noexcept { return height_ * cell_size_; }
    int region_count() const noexcept { return static_cast<int>(legend_.size()); }
    const std::vector<std::string>& legend() const noexcept { return legend_; }
    std::span<const std::uint8_t> cells() const noexcept { return cells_; }

    std::uint8_t at(int ix, int iy) const noexcept {
        return cells_[static_cast<std::size_t>(height_ - 1 - iy) * width_ + ix];
    }

    /// Region code of the cell containing a planar point (edges clamp inward).
    std::uint8_t code_at(PlanarPoint p) const noexcept;

    bool contains(PlanarPoint p) const noexcept;

    /// Equirectangular projection about the origin; throws OutOfBounds.
    PlanarPoint to_planar(GeoPoint p) const;
    GeoPoint to_geo(PlanarPoint p) const noexcept;

    bool operator==(const RegionMap&) const = default;

private:
    int width_;
    int height_;
    double cell_size_;
    GeoPoint origin_;
    std::vector<std::uint8_t> cells_;
    std::vector<std::string> legend_;
};

PlanarPoint geo_to_grid(const RegionMap& map, GeoPoint p);

RegionMap read_region_map(std::istream& in);
RegionMap load_region_map(const std::filesystem::path& path);
void write_region_map(std::ostream& out, const RegionMap& map);
void save_region_map(const std::filesystem::path& path, const RegionMap& map);

/// Float grid sharing the region-map header convention (heatmaps, error maps).
struct ValueGrid {
    int width = 0;
    int height = 0;
    double cell_size = 0.0;
    GeoPoint origin;
    double nodata = -9999.0;
    std::vector<double> values;  // row-major, north-to-south

    double& at(int ix, int iy) { return values[static_cast<std::size_t>(height - 1 - iy) * width + ix]; }
    double at(int ix, int iy) const { return values[static_cast<std::size_t>(height - 1 - iy) * width + ix]; }
};

void write_value_grid(std::ostream& out, const ValueGrid& grid, std::string_view units);
ValueGrid read_value_grid(std::istream& in);

}  // namespace ample
