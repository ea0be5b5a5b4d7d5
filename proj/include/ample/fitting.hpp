// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ample/line_matrix.hpp"
#include "ample/models.hpp"

namespace ample {

/// Point features for one model family, stored column-major.
///
/// All three models have a mean that is linear in their non-sigma
/// parameters, mu = theta . x. Layouts:
///   AMPLE  theta = [A, n_1..n_M, X, gamma]   x = [1, D_1..D_M, p, 10 log10 f]
///   CI     theta = [n]                       x = [10 log10(d / d0)], target l - fspl(f, d0)
///   ABG    theta = [alpha, beta, gamma_abg]  x = [10 log10 d, 1, 10 log10 f]
class FitDataset {
public:
    static FitDataset ample(int region_count);
    static FitDataset ci(double d0 = kDefaultCloseInDistance);
    static FitDataset abg();

    void add_ample(std::span<const double> weights, double penetrations, double freq_ghz, double path_loss);
    void add_ample(const LineMatrix& line, double freq_ghz, double path_loss);
    void add_ci(double freq_ghz, double distance_m, double path_loss);
    void add_abg(double freq_ghz, double distance_m, double path_loss);

    ModelKind kind() const noexcept { return kind_; }
    int region_count() const noexcept { return region_count_; }
    double d0() const noexcept { return d0_; }
    std::size_t size() const noexcept { return target_.size(); }
    bool empty() const noexcept { return target_.empty(); }
    std::size_t feature_count() const noexcept { return columns_.size(); }

    std::span<const double> column(std::size_t k) const noexcept { return columns_[k]; }
    /// Regression target (path loss, minus the free-space offset for CI).
    std::span<const double> target() const noexcept { return target_; }
    /// Per-point additive offset (CI only; empty otherwise).
    std::span<const double> offset() const noexcept { return offset_; }
    double path_loss(std::size_t z) const noexcept { return offset_.empty() ? target_[z] : target_[z] + offset_[z]; }
    std::vector<double> path_losses() const;

    /// Column base pointers for the kernel tables.
    std::vector<const double*> column_pointers() const;

    /// Mean-parameter vector in this dataset's layout; sigma excluded.
    std::vector<double> theta_of(const ModelParams& params) const;
    ModelParams params_of(std::span<const double> theta, double sigma) const;

    /// Mean path loss for every point.
    std::vector<double> predict(const ModelParams& params) const;

private:
    FitDataset(ModelKind kind, std::size_t features, int region_count, double d0);
    void push(std::span<const double> x, double target, double offset);

    ModelKind kind_;
    int region_count_ = 0;
    double d0_ = kDefaultCloseInDistance;
    std::vector<std::vector<double>> columns_;
    std::vector<double> target_;
    std::vector<double> offset_;
};

struct FitConfig {
    double step_size = 2e-6;
    std::uint64_t max_iters = 2'000'000;
    double grad_tol = 1e-4;
    double sigma_floor = 1e-3;
    std::optional<ModelParams> init;  // per-model default when empty
    std::uint64_t anchor_interval = 10'000;  // exact re-evaluation and trace period

    void validate() const;
};

struct TracePoint {
    std::uint64_t iter = 0;
    double nll = 0.0;
    double sigma = 0.0;
};

struct FitResult {
    ModelParams params;
    double final_nll = 0.0;
    std::uint64_t iters = 0;     // step attempts, rejected ones included
    std::uint64_t rejected = 0;  // attempts that would have raised the nll
    bool converged = false;
    double grad_norm = 0.0;       // projected infinity norm at `params`
    bool rank_deficient = false;  // design matrix columns linearly dependent
    std::vector<TracePoint> trace;
};

/// Default starting point for a dataset's model family.
ModelParams default_init(const FitDataset& data);

double nll(const ModelParams& params, const FitDataset& data);
/// Gradient of nll: mean parameters in theta order, then sigma.
std::vector<double> grad(const ModelParams& params, const FitDataset& data);

double nll_ample(const AmpleParams& params, const FitDataset& data);
double nll_ci(const CiParams& params, const FitDataset& data);
double nll_abg(const AbgParams& params, const FitDataset& data);
std::vector<double> grad_ample(const AmpleParams& params, const FitDataset& data);
std::vector<double> grad_ci(const CiParams& params, const FitDataset& data);
std::vector<double> grad_abg(const AbgParams& params, const FitDataset& data);

FitResult fit(const FitDataset& data, const FitConfig& cfg = {});
FitResult fit_ample(const FitDataset& data, const FitConfig& cfg = {});
FitResult fit_ci(const FitDataset& data, const FitConfig& cfg = {});
FitResult fit_abg(const FitDataset& data, const FitConfig& cfg = {});

/// Least-squares CI slope and RMS residual; the exact Gaussian MLE.
CiParams fit_ci_closed_form(const FitDataset& data);

/// True when the design columns are numerically dependent.
bool design_rank_deficient(const FitDataset& data);

}  // namespace ample
