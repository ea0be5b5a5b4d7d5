// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ample {

double rmse(std::span<const double> pred, std::span<const double> ref);
double mae(std::span<const double> pred, std::span<const double> ref);

/// Percentage of points on the same side of `lt` in both lists.
double thr(std::span<const double> pred, std::span<const double> ref, double lt);

struct ThrRange {
    double lt_min = 80.0;
    double lt_max = 100.0;
    double step = 1.0;

    static ThrRange los() { return {80.0, 100.0, 1.0}; }
    static ThrRange nlos() { return {100.0, 120.0, 1.0}; }
    void validate() const;
    std::vector<double> thresholds() const;
};

/// Mean of (100 - thr) over the threshold grid.
double ahre(std::span<const double> pred, std::span<const double> ref, const ThrRange& range);

// ---------------------------------------------------------------------------
// Distribution fitting

// Declaration order is the tie-break order.
enum class Family { Normal, Lognormal, Gamma, Weibull, Rayleigh, Ricean, Chisquare };

inline constexpr std::array<Family, 7> kAllFamilies = {Family::Normal,   Family::Lognormal, Family::Gamma,
                                                       Family::Weibull,  Family::Rayleigh,  Family::Ricean,
                                                       Family::Chisquare};

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view name);
int parameter_count(Family f) noexcept;
bool positive_support(Family f) noexcept;
/// True when `outer` contains `inner` as a special or limiting case.
bool nests(Family outer, Family inner) noexcept;

// Parameters by family:
//   normal     {mean, sd}          lognormal {mu, sigma} of log x
//   gamma      {shape, scale}      weibull   {shape, scale}
//   rayleigh   {sigma}             ricean    {nu, sigma}
//   chisquare  {dof}
struct DistFit {
    Family family = Family::Normal;
    std::array<double, 2> params{};
    double loglik = 0.0;
    double aic = 0.0;

    double log_pdf(double x) const;
    double pdf(double x) const;
    double mean() const;
    double stddev() const;
};

/// MLE for one family; nullopt when the family cannot describe the data.
std::optional<DistFit> fit_distribution(Family family, std::span<const double> data);

struct DistSelection {
    DistFit best;
    std::vector<DistFit> candidates;  // every family that fitted, in family order
    std::vector<std::string> notices;
};

inline constexpr std::size_t kMinDistributionPoints = 30;

DistSelection select_distribution(std::span<const double> data);
DistFit fit_best_distribution(std::span<const double> data);

struct PmdeResult {
    double value = 0.0;
    DistFit pred_fit;
    DistFit ref_fit;
    std::vector<std::string> notices;
};

inline constexpr std::size_t kPmdeNodes = 20001;

PmdeResult pmde_detail(std::span<const double> pred, std::span<const double> ref);
double pmde(std::span<const double> pred, std::span<const double> ref);

// ---------------------------------------------------------------------------
// Timing

/// Fills its argument with one prediction per data point.
using BatchPredictor = std::function<void(std::span<double>)>;

/// Mean wall time per point in nanoseconds over `rounds` full passes.
double mean_sim_time(const BatchPredictor& model, std::size_t points, std::size_t rounds);

// ---------------------------------------------------------------------------

struct MetricsReport {
    std::size_t points = 0;
    double rmse = 0.0;
    double mae = 0.0;
    double ahre = 0.0;
    double pmde = 0.0;
    double t_p = 0.0;  // ns
    ThrRange range;
    DistFit pred_dist;
    DistFit ref_dist;
    std::vector<std::string> notices;
};

MetricsReport evaluate_predictions(std::span<const double> pred, std::span<const double> ref, const ThrRange& range);

/// Sorted absolute errors with their empirical CDF values.
std::vector<std::pair<double, double>> abs_error_cdf(std::span<const double> pred, std::span<const double> ref);

}  // namespace ample
