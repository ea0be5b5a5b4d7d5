// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ample/line_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ample/error.hpp"

namespace ample {

namespace {

constexpr double kMinSegment = 1e-9;  // meters; shorter runs are corner grazes
constexpr double kDegenerate = 1e-9;
constexpr auto kBuilding = code_value(RegionCode::Building);

void append_run(std::vector<Segment>& runs, std::uint8_t code, double length) {
    if (!(length > kMinSegment)) return;
    if (!runs.empty() && runs.back().region == code) {
        runs.back().length += length;
    } else {
        runs.push_back({code, length});
    }
}

// Distance along the line to the next vertical (or horizontal) grid line.
double next_crossing(int cell, int step, double start, double dir, double cell_size) {
    if (step == 0) return std::numeric_limits<double>::infinity();
    const double boundary = (step > 0 ? cell + 1 : cell) * cell_size;
    return (boundary - start) / dir;
}

}  // namespace

std::vector<Segment> region_runs(const RegionMap& map, PlanarPoint a, PlanarPoint b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double length = std::hypot(dx, dy);
    std::vector<Segment> runs;
    if (!(length > kDegenerate)) return runs;

    const double dir_x = dx / length;
    const double dir_y = dy / length;
    const double cs = map.cell_size();
    int ix = std::clamp(static_cast<int>(std::floor(a.x / cs)), 0, map.width() - 1);
    int iy = std::clamp(static_cast<int>(std::floor(a.y / cs)), 0, map.height() - 1);
    const int step_x = dx > 0 ? 1 : (dx < 0 ? -1 : 0);
    const int step_y = dy > 0 ? 1 : (dy < 0 ? -1 : 0);

    // Cell-boundary walk: each iteration advances to the nearer gridline.
    // Crossing distances are recomputed from the cell index, so no error
    // accumulates over long lines. On exact corner ties x steps first.
    double t = 0.0;
    while (true) {
        const double t_x = next_crossing(ix, step_x, a.x, dir_x, cs);
        const double t_y = next_crossing(iy, step_y, a.y, dir_y, cs);
        const double t_next = std::min({t_x, t_y, length});
        append_run(runs, map.at(ix, iy), t_next - t);
        if (t_next >= length) break;
        if (t_x <= t_y) {
            ix += step_x;
        } else {
            iy += step_y;
        }
        t = std::max(t, t_next);
        if (ix < 0 || iy < 0 || ix >= map.width() || iy >= map.height()) {
            // Only reachable through rounding at the map edge.
            ix = std::clamp(ix, 0, map.width() - 1);
            iy = std::clamp(iy, 0, map.height() - 1);
            append_run(runs, map.at(ix, iy), length - t);
            break;
        }
    }
    return runs;
}

LineMatrix trace_line(const RegionMap& map, PlanarPoint tx, PlanarPoint rx, double d0) {
    if (!map.contains(tx) || !map.contains(rx)) throw Error(Errc::OutOfBounds, "link endpoint outside the map");
    const double length = std::hypot(rx.x - tx.x, rx.y - tx.y);
    if (!(length > kDegenerate)) throw Error(Errc::DegenerateLink, "transmitter and receiver coincide");
    if (!(d0 > 0.0)) throw Error(Errc::InvalidArgument, "close-in distance must be positive");
    if (d0 >= length) throw Error(Errc::CiExceedsLink, "close-in distance is not shorter than the link");

    const auto runs = region_runs(map, tx, rx);

    LineMatrix line;
    line.total_length = length;
    line.rx_indoor = map.code_at(rx) == kBuilding;
    for (std::size_t i = 1; i < runs.size(); ++i) {
        if (runs[i - 1].region == kBuilding || runs[i].region == kBuilding) ++line.penetrations;
    }

    line.segments.reserve(runs.size() + 1);
    line.segments.push_back({kCloseInRegion, d0});
    double skip = d0;
    for (const auto& run : runs) {
        if (skip >= run.length) {
            skip -= run.length;
            continue;
        }
        const double kept = run.length - skip;
        skip = 0.0;
        if (kept > kMinSegment) line.segments.push_back({run.region, kept});
    }
    return line;
}

LineMatrix trace_line(const RegionMap& map, GeoPoint tx, GeoPoint rx, double d0) {
    return trace_line(map, map.to_planar(tx), map.to_planar(rx), d0);
}

Visibility classify_los(const RegionMap& map, PlanarPoint tx, PlanarPoint rx) {
    if (!map.contains(tx) || !map.contains(rx)) throw Error(Errc::OutOfBounds, "link endpoint outside the map");
    const auto runs = region_runs(map, tx, rx);
    // The building the transmitter stands on does not block its own links.
    const std::size_t first = (!runs.empty() && runs.front().region == kBuilding) ? 1 : 0;
    for (std::size_t i = first; i < runs.size(); ++i) {
        if (runs[i].region == kBuilding) return Visibility::Nlos;
    }
    return Visibility::Los;
}

Visibility classify_los(const RegionMap& map, GeoPoint tx, GeoPoint rx) {
    return classify_los(map, map.to_planar(tx), map.to_planar(rx));
}

}  // namespace ample
