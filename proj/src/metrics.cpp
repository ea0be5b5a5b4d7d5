// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ample/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ample/error.hpp"
#include "ample/kernels.hpp"

namespace ample {

namespace {

void require_pair(std::span<const double> pred, std::span<const double> ref) {
    if (pred.size() != ref.size()) {
        throw Error(Errc::LengthMismatch, "prediction and reference lengths differ (" + std::to_string(pred.size()) +
                                              " vs " + std::to_string(ref.size()) + ")");
    }
    if (pred.empty()) throw Error(Errc::Empty, "no points");
}

}  // namespace

double rmse(std::span<const double> pred, std::span<const double> ref) {
    require_pair(pred, ref);
    const auto s = kernels::active().error_sums(pred.data(), ref.data(), pred.size());
    return std::sqrt(s.sum_sq / static_cast<double>(pred.size()));
}

double mae(std::span<const double> pred, std::span<const double> ref) {
    require_pair(pred, ref);
    const auto s = kernels::active().error_sums(pred.data(), ref.data(), pred.size());
    return s.sum_abs / static_cast<double>(pred.size());
}

double thr(std::span<const double> pred, std::span<const double> ref, double lt) {
    require_pair(pred, ref);
    const auto hits = kernels::active().threshold_agreement(pred.data(), ref.data(), pred.size(), lt);
    return 100.0 * static_cast<double>(hits) / static_cast<double>(pred.size());
}

void ThrRange::validate() const {
    if (!(lt_min <= lt_max)) throw Error(Errc::InvalidArgument, "threshold range is inverted");
    if (!(step > 0.0)) throw Error(Errc::InvalidArgument, "threshold step must be positive");
}

std::vector<double> ThrRange::thresholds() const {
    validate();
    const auto count = static_cast<std::size_t>(std::floor((lt_max - lt_min) / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lt_min + step * static_cast<double>(i);
    return out;
}

double ahre(std::span<const double> pred, std::span<const double> ref, const ThrRange& range) {
    require_pair(pred, ref);
    const auto grid = range.thresholds();
    double total = 0.0;
    for (double lt : grid) total += 100.0 - thr(pred, ref, lt);
    return total / static_cast<double>(grid.size());
}

double mean_sim_time(const BatchPredictor& model, std::size_t points, std::size_t rounds) {
    if (points == 0) throw Error(Errc::Empty, "no points to time");
    if (rounds == 0) throw Error(Errc::InvalidArgument, "rounds must be at least 1");
    std::vector<double> out(points);
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    for (std::size_t r = 0; r < rounds; ++r) model(out);
    const auto stop = clock::now();
    const double ns = std::chrono::duration<double, std::nano>(stop - start).count();
    return ns / (static_cast<double>(rounds) * static_cast<double>(points));
}

MetricsReport evaluate_predictions(std::span<const double> pred, std::span<const double> ref, const ThrRange& range) {
    require_pair(pred, ref);
    MetricsReport report;
    report.points = pred.size();
    report.rmse = rmse(pred, ref);
    report.mae = mae(pred, ref);
    report.range = range;
    report.ahre = ahre(pred, ref, range);
    auto p = pmde_detail(pred, ref);
    report.pmde = p.value;
    report.pred_dist = p.pred_fit;
    report.ref_dist = p.ref_fit;
    report.notices = std::move(p.notices);
    return report;
}

std::vector<std::pair<double, double>> abs_error_cdf(std::span<const double> pred, std::span<const double> ref) {
    require_pair(pred, ref);
    std::vector<double> err(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) err[i] = std::fabs(pred[i] - ref[i]);
    std::sort(err.begin(), err.end());
    std::vector<std::pair<double, double>> out(err.size());
    const double n = static_cast<double>(err.size());
    for (std::size_t i = 0; i < err.size(); ++i) out[i] = {err[i], static_cast<double>(i + 1) / n};
    return out;
}

}  // namespace ample
