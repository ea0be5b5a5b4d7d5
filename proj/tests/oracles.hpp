// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference computations that share no code with the library under test.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "ample/region_map.hpp"
#include "ample/rng.hpp"

namespace oracle {

// Free-space loss written out from its definition in long double.
inline long double fspl(long double f_ghz, long double d0) {
    const long double c = 299792458.0L;
    return 20.0L * std::log10(4.0L * std::numbers::pi_v<long double> * f_ghz * 1e9L * d0 / c);
}

// Gaussian negative log-likelihood of residuals, naive long-double sum.
inline long double gaussian_nll(const std::vector<long double>& residuals, long double sigma) {
    long double acc = 0.0L;
    for (long double r : residuals) acc += r * r;
    const auto z = static_cast<long double>(residuals.size());
    return z * std::log(sigma * std::sqrt(2.0L * std::numbers::pi_v<long double>)) + acc / (2.0L * sigma * sigma);
}

struct CiClosedForm {
    long double n = 0.0L;
    long double sigma = 0.0L;
};

// Setting dNLL/dn = 0 and dNLL/dsigma = 0 for the CI model gives the
// least-squares slope through the origin and the RMS residual.
inline CiClosedForm ci_mle(const std::vector<double>& f, const std::vector<double>& d, const std::vector<double>& l,
                           double d0) {
    long double sab = 0.0L;
    long double sbb = 0.0L;
    for (std::size_t i = 0; i < l.size(); ++i) {
        const long double a = l[i] - fspl(f[i], d0);
        const long double b = 10.0L * std::log10(static_cast<long double>(d[i]) / d0);
        sab += a * b;
        sbb += b * b;
    }
    CiClosedForm out;
    out.n = sab / sbb;
    long double rss = 0.0L;
    for (std::size_t i = 0; i < l.size(); ++i) {
        const long double r = l[i] - fspl(f[i], d0) - out.n * 10.0L * std::log10(static_cast<long double>(d[i]) / d0);
        rss += r * r;
    }
    out.sigma = std::sqrt(rss / static_cast<long double>(l.size()));
    return out;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Overlap integral of |N(0,1) - N(delta,1)| over the real line.
inline double equal_variance_normal_l1(double delta) { return 2.0 * (2.0 * normal_cdf(delta / 2.0) - 1.0); }

struct Run {
    std::uint8_t code = 0;
    long count = 0;        // samples in the run
    double length = 0.0;   // count * step
};

// Samples the straight line at `step` metres from `a` (inclusive) and run-length
// encodes the region codes read directly from the cell array.
inline std::vector<Run> sampled_runs(const ample::RegionMap& map, ample::PlanarPoint a, ample::PlanarPoint b,
                                     double step) {
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const auto n = static_cast<long>(std::floor(len / step));
    std::vector<Run> out;
    for (long i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) * step;
        if (s >= len) break;
        const double x = a.x + (b.x - a.x) * (s / len);
        const double y = a.y + (b.y - a.y) * (s / len);
        int ix = static_cast<int>(std::floor(x / map.cell_size()));
        int iy = static_cast<int>(std::floor(y / map.cell_size()));
        ix = std::min(std::max(ix, 0), map.width() - 1);
        iy = std::min(std::max(iy, 0), map.height() - 1);
        const std::uint8_t code = map.cells()[static_cast<std::size_t>(map.height() - 1 - iy) * map.width() + ix];
        if (!out.empty() && out.back().code == code) {
            ++out.back().count;
        } else {
            out.push_back({code, 1, 0.0});
        }
    }
    for (auto& r : out) r.length = static_cast<double>(r.count) * step;
    return out;
}

// Checks traversal runs (full line, no close-in cut) against sampled runs.
// Each traversal run is projected onto the sample grid; runs holding no
// sample vanish and neighbours merge. The projected sequence must equal the
// sampled one code for code, and each merged run's exact length must lie
// within `tol` of its sampled length. Returns an empty string on success.
template <class SegmentList>
std::string compare_with_sampling(const SegmentList& runs, const std::vector<Run>& sampled, double step, double tol) {
    std::vector<Run> projected;
    std::vector<double> exact;
    double start = 0.0;
    for (const auto& seg : runs) {
        const double end = start + seg.length;
        const long count = static_cast<long>(std::ceil(end / step)) - static_cast<long>(std::ceil(start / step));
        if (!projected.empty() && projected.back().code == seg.region) {
            projected.back().count += count;
            exact.back() += seg.length;
        } else if (count > 0) {
            projected.push_back({seg.region, count, 0.0});
            exact.push_back(seg.length);
        } else if (!exact.empty()) {
            exact.back() += seg.length;  // sub-sample sliver
        }
        start = end;
    }
    if (projected.size() != sampled.size()) {
        return "run count " + std::to_string(projected.size()) + " vs sampled " + std::to_string(sampled.size());
    }
    for (std::size_t k = 0; k < sampled.size(); ++k) {
        if (projected[k].code != sampled[k].code) return "code differs at run " + std::to_string(k);
        if (std::fabs(exact[k] - sampled[k].length) > tol) {
            return "length differs at run " + std::to_string(k) + ": " + std::to_string(exact[k]) + " vs " +
                   std::to_string(sampled[k].length);
        }
    }
    return {};
}

// Random map of rectangular building, foliage and water blobs over open space.
inline ample::RegionMap random_map(std::uint64_t seed, int width, int height, double cell) {
    ample::Rng rng(seed);
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(width) * height, 2);
    const int blobs = 10 + static_cast<int>(rng() % 30);
    for (int b = 0; b < blobs; ++b) {
        const auto code = static_cast<std::uint8_t>(1 + rng() % 4);
        const int w = 1 + static_cast<int>(rng() % 8);
        const int h = 1 + static_cast<int>(rng() % 8);
        const int x0 = static_cast<int>(rng() % static_cast<std::uint64_t>(width));
        const int y0 = static_cast<int>(rng() % static_cast<std::uint64_t>(height));
        for (int y = y0; y < std::min(height, y0 + h); ++y) {
            for (int x = x0; x < std::min(width, x0 + w); ++x) cells[static_cast<std::size_t>(y) * width + x] = code;
        }
    }
    return ample::RegionMap(width, height, cell, {51.0, -1.0}, std::move(cells), ample::RegionMap::standard_legend());
}

inline ample::PlanarPoint random_point(ample::Rng& rng, const ample::RegionMap& map) {
    return {rng.uniform() * map.extent_x(), rng.uniform() * map.extent_y()};
}

}  // namespace oracle
