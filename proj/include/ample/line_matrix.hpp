// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <vector>

#include "ample/region_map.hpp"

namespace ample {

/// Region index 0 marks the close-in segment at the start of every link.
inline constexpr std::uint8_t kCloseInRegion = 0;
inline constexpr double kDefaultCloseInDistance = 1.0;

struct Segment {
    std::uint8_t region = 0;
    double length = 0.0;  // meters

    bool operator==(const Segment&) const = default;
};

/// Region-weighted record of one transmitter-receiver straight line.
struct LineMatrix {
    std::vector<Segment> segments;  // segments[0] is the close-in segment
    int penetrations = 0;
    double total_length = 0.0;
    bool rx_indoor = false;  // receiver cell is a building; such links are flagged, not modeled

    double close_in_distance() const noexcept { return segments.empty() ? 0.0 : segments.front().length; }
};

enum class Visibility : std::uint8_t { Los, Nlos };

/// Merged positive-length region runs along the full segment a->b, before
/// the close-in region is applied.
std::vector<Segment> region_runs(const RegionMap& map, PlanarPoint a, PlanarPoint b);

LineMatrix trace_line(const RegionMap& map, PlanarPoint tx, PlanarPoint rx, double d0 = kDefaultCloseInDistance);
LineMatrix trace_line(const RegionMap& map, GeoPoint tx, GeoPoint rx, double d0 = kDefaultCloseInDistance);

Visibility classify_los(const RegionMap& map, PlanarPoint tx, PlanarPoint rx);
Visibility classify_los(const RegionMap& map, GeoPoint tx, GeoPoint rx);

}  // namespace ample
