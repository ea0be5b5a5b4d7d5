// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "ample/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ample/error.hpp"
#include "ample/kernels.hpp"

namespace ample {

namespace {

const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

double gaussian_nll(std::size_t z, double rss, double sigma) {
    return static_cast<double>(z) * (std::log(sigma) + kLogSqrt2Pi) + rss / (2.0 * sigma * sigma);
}

void require_finite(std::span<const double> values, double target) {
    for (double v : values) {
        if (!std::isfinite(v)) throw Error(Errc::InvalidArgument, "non-finite feature value");
    }
    if (!std::isfinite(target)) throw Error(Errc::InvalidArgument, "non-finite path loss");
}

void require_kind(const FitDataset& data, ModelKind kind) {
    if (data.kind() != kind) {
        throw Error(Errc::InvalidArgument, "dataset holds " + std::string(to_string(data.kind())) + " features, not " +
                                               std::string(to_string(kind)));
    }
}

// Residual sums at theta; c receives X^T r.
double exact_sums(const FitDataset& data, std::span<const double> theta, std::span<double> c) {
    const auto cols = data.column_pointers();
    return kernels::active().residual_sums(cols.data(), cols.size(), data.target().data(), data.size(), theta.data(),
                                           c.data());
}

}  // namespace

// ---------------------------------------------------------------------------
// FitDataset

FitDataset::FitDataset(ModelKind kind, std::size_t features, int region_count, double d0)
    : kind_(kind), region_count_(region_count), d0_(d0), columns_(features) {}

FitDataset FitDataset::ample(int region_count) {
    if (region_count < 1 || region_count > kMaxRegionCount) {
        throw Error(Errc::InvalidArgument, "region count must lie in 1..8");
    }
    return FitDataset(ModelKind::Ample, static_cast<std::size_t>(region_count) + 3, region_count, kDefaultCloseInDistance);
}

FitDataset FitDataset::ci(double d0) {
    if (!(d0 > 0.0)) throw Error(Errc::InvalidArgument, "reference distance must be positive");
    return FitDataset(ModelKind::Ci, 1, 0, d0);
}

FitDataset FitDataset::abg() { return FitDataset(ModelKind::Abg, 3, 0, kDefaultCloseInDistance); }

void FitDataset::push(std::span<const double> x, double target, double offset) {
    require_finite(x, target);
    for (std::size_t k = 0; k < x.size(); ++k) columns_[k].push_back(x[k]);
    target_.push_back(target);
    if (kind_ == ModelKind::Ci) offset_.push_back(offset);
}

void FitDataset::add_ample(std::span<const double> weights, double penetrations, double freq_ghz, double path_loss) {
    require_kind(*this, ModelKind::Ample);
    if (weights.size() != static_cast<std::size_t>(region_count_)) {
        throw Error(Errc::RegionCountMismatch, "expected " + std::to_string(region_count_) + " region weights");
    }
    if (!(freq_ghz > 0.0)) throw Error(Errc::InvalidArgument, "frequency must be positive");
    double x[kernels::kMaxFeatures];
    std::size_t k = 0;
    x[k++] = 1.0;
    for (double w : weights) x[k++] = w;
    x[k++] = penetrations;
    x[k++] = 10.0 * std::log10(freq_ghz);
    push({x, k}, path_loss, 0.0);
}

void FitDataset::add_ample(const LineMatrix& line, double freq_ghz, double path_loss) {
    const auto weights = collapse_line(line, region_count_);
    add_ample(weights, line.penetrations, freq_ghz, path_loss);
}

void FitDataset::add_ci(double freq_ghz, double distance_m, double path_loss) {
    require_kind(*this, ModelKind::Ci);
    if (!(distance_m >= d0_)) {
        throw Error(Errc::DistanceBelowReference, "distance below the CI reference distance");
    }
    const double offset = fspl(freq_ghz, d0_);
    const double x = 10.0 * std::log10(distance_m / d0_);
    push({&x, 1}, path_loss - offset, offset);
}

void FitDataset::add_abg(double freq_ghz, double distance_m, double path_loss) {
    require_kind(*this, ModelKind::Abg);
    if (!(distance_m > 0.0) || !(freq_ghz > 0.0)) {
        throw Error(Errc::InvalidArgument, "ABG needs positive distance and frequency");
    }
    const double x[3] = {10.0 * std::log10(distance_m), 1.0, 10.0 * std::log10(freq_ghz)};
    push(x, path_loss, 0.0);
}

std::vector<double> FitDataset::path_losses() const {
    std::vector<double> out(size());
    for (std::size_t z = 0; z < size(); ++z) out[z] = path_loss(z);
    return out;
}

std::vector<const double*> FitDataset::column_pointers() const {
    std::vector<const double*> ptrs;
    ptrs.reserve(columns_.size());
    for (const auto& c : columns_) ptrs.push_back(c.data());
    return ptrs;
}

std::vector<double> FitDataset::theta_of(const ModelParams& params) const {
    if (kind_of(params) != kind_) {
        throw Error(Errc::InvalidArgument, "parameters are " + std::string(to_string(kind_of(params))) +
                                               ", dataset is " + std::string(to_string(kind_)));
    }
    return std::visit(
        [&](const auto& p) -> std::vector<double> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AmpleParams>) {
                if (p.region_count() != region_count_) {
                    throw Error(Errc::RegionCountMismatch, "parameters have " + std::to_string(p.region_count()) +
                                                               " exponents, data has " +
                                                               std::to_string(region_count_) + " regions");
                }
                std::vector<double> t{p.A};
                t.insert(t.end(), p.n.begin(), p.n.end());
                t.push_back(p.X);
                t.push_back(p.gamma);
                return t;
            } else if constexpr (std::is_same_v<T, CiParams>) {
                if (p.d0 != d0_) throw Error(Errc::InvalidArgument, "CI reference distance differs from the dataset's");
                return {p.n};
            } else {
                return {p.alpha, p.beta, p.gamma_abg};
            }
        },
        params);
}

ModelParams FitDataset::params_of(std::span<const double> theta, double sigma) const {
    switch (kind_) {
        case ModelKind::Ample: {
            AmpleParams p;
            p.A = theta[0];
            p.n.assign(theta.begin() + 1, theta.begin() + 1 + region_count_);
            p.X = theta[region_count_ + 1];
            p.gamma = theta[region_count_ + 2];
            p.sigma = sigma;
            return p;
        }
        case ModelKind::Ci: return CiParams{theta[0], sigma, d0_};
        case ModelKind::Abg: return AbgParams{theta[0], theta[1], theta[2], sigma};
    }
    throw Error(Errc::InvalidArgument, "unknown model kind");
}

std::vector<double> FitDataset::predict(const ModelParams& params) const {
    const auto theta = theta_of(params);
    const auto cols = column_pointers();
    std::vector<double> out(size());
    kernels::active().linear_predict(cols.data(), cols.size(), size(), theta.data(),
                                     offset_.empty() ? nullptr : offset_.data(), out.data());
    return out;
}

// ---------------------------------------------------------------------------
// Likelihood

void FitConfig::validate() const {
    if (!(step_size > 0.0)) throw Error(Errc::InvalidArgument, "step size must be positive");
    if (!(grad_tol > 0.0)) throw Error(Errc::InvalidArgument, "gradient tolerance must be positive");
    if (!(sigma_floor > 0.0)) throw Error(Errc::InvalidArgument, "sigma floor must be positive");
    if (anchor_interval == 0) throw Error(Errc::InvalidArgument, "anchor interval must be positive");
}

ModelParams default_init(const FitDataset& data) {
    switch (data.kind()) {
        case ModelKind::Ample: {
            if (data.region_count() == kStandardRegionCount) return ample_table_preset(Scenario::UMa, Environment::Nlos);
            AmpleParams p;
            p.A = 60.0;
            p.n.assign(static_cast<std::size_t>(data.region_count()), 2.0);
            p.X = 0.0;
            p.gamma = 2.0;
            p.sigma = 5.0;
            return p;
        }
        case ModelKind::Ci: return CiParams{2.0, 5.0, data.d0()};
        case ModelKind::Abg: return AbgParams{3.0, 20.0, 2.0, 5.0};
    }
    throw Error(Errc::InvalidArgument, "unknown model kind");
}

double nll(const ModelParams& params, const FitDataset& data) {
    if (data.empty()) throw Error(Errc::EmptyDataset, "no data points");
    const double sigma = sigma_of(params);
    if (!(sigma > 0.0)) throw Error(Errc::NonPositiveSigma, "sigma must be positive");
    const auto theta = data.theta_of(params);
    std::vector<double> c(theta.size());
    return gaussian_nll(data.size(), exact_sums(data, theta, c), sigma);
}

std::vector<double> grad(const ModelParams& params, const FitDataset& data) {
    if (data.empty()) throw Error(Errc::EmptyDataset, "no data points");
    const double sigma = sigma_of(params);
    if (!(sigma > 0.0)) throw Error(Errc::NonPositiveSigma, "sigma must be positive");
    const auto theta = data.theta_of(params);
    std::vector<double> g(theta.size() + 1);
    const double rss = exact_sums(data, theta, {g.data(), theta.size()});
    const double s2 = sigma * sigma;
    for (std::size_t k = 0; k < theta.size(); ++k) g[k] /= s2;
    g.back() = static_cast<double>(data.size()) / sigma - rss / (s2 * sigma);
    return g;
}

double nll_ample(const AmpleParams& p, const FitDataset& d) { return require_kind(d, ModelKind::Ample), nll(p, d); }
double nll_ci(const CiParams& p, const FitDataset& d) { return require_kind(d, ModelKind::Ci), nll(p, d); }
double nll_abg(const AbgParams& p, const FitDataset& d) { return require_kind(d, ModelKind::Abg), nll(p, d); }

std::vector<double> grad_ample(const AmpleParams& p, const FitDataset& d) {
    require_kind(d, ModelKind::Ample);
    return grad(p, d);
}
std::vector<double> grad_ci(const CiParams& p, const FitDataset& d) {
    require_kind(d, ModelKind::Ci);
    return grad(p, d);
}
std::vector<double> grad_abg(const AbgParams& p, const FitDataset& d) {
    require_kind(d, ModelKind::Abg);
    return grad(p, d);
}

// ---------------------------------------------------------------------------
// Rank check: pivoted Cholesky of the unit-diagonal Gram matrix.

namespace {

bool gram_rank_deficient(std::vector<double> g, std::size_t k) {
    constexpr double kTol = 1e-10;
    std::vector<double> scale(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (!(g[i * k + i] > 0.0)) return true;
        scale[i] = 1.0 / std::sqrt(g[i * k + i]);
    }
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) g[i * k + j] *= scale[i] * scale[j];
    }
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = i;
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = step;
        for (std::size_t i = step + 1; i < k; ++i) {
            if (g[order[i] * k + order[i]] > g[order[best] * k + order[best]]) best = i;
        }
        std::swap(order[step], order[best]);
        const std::size_t p = order[step];
        const double pivot = g[p * k + p];
        if (!(pivot > kTol)) return true;
        const double root = std::sqrt(pivot);
        for (std::size_t i = step + 1; i < k; ++i) g[order[i] * k + p] /= root;
        for (std::size_t i = step + 1; i < k; ++i) {
            for (std::size_t j = step + 1; j <= i; ++j) {
                const std::size_t a = order[i];
                const std::size_t b = order[j];
                g[a * k + b] -= g[a * k + p] * g[b * k + p];
                g[b * k + a] = g[a * k + b];
            }
        }
    }
    return false;
}

std::vector<double> gram_of(const FitDataset& data) {
    const auto cols = data.column_pointers();
    std::vector<double> g(cols.size() * cols.size());
    kernels::active().gram(cols.data(), cols.size(), data.size(), g.data());
    return g;
}

}  // namespace

bool design_rank_deficient(const FitDataset& data) {
    if (data.empty()) throw Error(Errc::EmptyDataset, "no data points");
    return gram_rank_deficient(gram_of(data), data.feature_count());
}

// ---------------------------------------------------------------------------
// Fixed-step descent.
//
// The mean is linear, so between exact anchors the residual statistics
// follow from the Gram matrix G = X^T X: with delta = theta - theta_a,
//   X^T r = c_a + G delta,   RSS = RSS_a + 2 delta.c_a + delta.G delta.
// Each step then costs O(K^2) instead of a pass over the data. Anchors
// refresh (c_a, RSS_a) by a direct pass to stop rounding drift.
//
// A step that would raise the nll is rejected and the step multiplier
// halved; accepted steps double it back toward 1. While the fixed step
// descends, the iterates are those of plain full-batch descent.

FitResult fit(const FitDataset& data, const FitConfig& cfg) {
    cfg.validate();
    if (data.empty()) throw Error(Errc::EmptyDataset, "no data points");
    const ModelParams init = cfg.init ? *cfg.init : default_init(data);
    std::vector<double> theta = data.theta_of(init);
    double sigma = sigma_of(init);
    if (!(sigma > 0.0)) throw Error(Errc::NonPositiveSigma, "initial sigma must be positive");

    const std::size_t k = theta.size();
    const std::size_t z = data.size();
    const double zd = static_cast<double>(z);
    const auto g_mat = gram_of(data);

    FitResult result;
    result.rank_deficient = gram_rank_deficient(g_mat, k);

    // Projected gradient norm: the sigma component is ignored when the floor blocks it.
    auto grad_norm = [&](std::span<const double> c, double rss, double s) {
        double norm = 0.0;
        const double s2 = s * s;
        for (std::size_t i = 0; i < k; ++i) norm = std::max(norm, std::fabs(c[i] / s2));
        const double gs = zd / s - rss / (s2 * s);
        if (!(s <= cfg.sigma_floor && gs > 0.0)) norm = std::max(norm, std::fabs(gs));
        return norm;
    };

    std::vector<double> theta_a = theta;
    std::vector<double> c_a(k);
    double rss_a = exact_sums(data, theta_a, c_a);

    if (cfg.max_iters == 0) {
        result.params = init;
        result.final_nll = gaussian_nll(z, rss_a, sigma);
        result.grad_norm = grad_norm(c_a, rss_a, sigma);
        result.converged = false;
        result.trace.push_back({0, result.final_nll, sigma});
        return result;
    }

    result.trace.push_back({0, gaussian_nll(z, rss_a, sigma), sigma});

    // Residual statistics at theta_a + delta from the anchor and the Gram matrix.
    std::vector<double> delta(k), c(k), c_try(k), theta_try(k);
    auto sums_at = [&](std::span<const double> th, std::span<double> out) {
        double lin = 0.0;
        double quad = 0.0;
        for (std::size_t i = 0; i < k; ++i) delta[i] = th[i] - theta_a[i];
        for (std::size_t i = 0; i < k; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < k; ++j) s += g_mat[i * k + j] * delta[j];
            out[i] = c_a[i] + s;
            lin += delta[i] * c_a[i];
            quad += delta[i] * s;
        }
        return rss_a + 2.0 * lin + quad;
    };
    auto value_of = [&](double rss_raw, double s) {
        return std::isfinite(rss_raw) ? gaussian_nll(z, std::max(0.0, rss_raw), s) : rss_raw;
    };
    auto reanchor = [&] {
        theta_a = theta;
        rss_a = exact_sums(data, theta_a, c_a);
        c = c_a;
    };

    c = c_a;
    double rss = rss_a;
    double value = gaussian_nll(z, rss, sigma);
    if (!std::isfinite(value)) throw Error(Errc::Diverged, "negative log-likelihood is non-finite at the initial point");

    std::vector<double> best_theta = theta;
    double best_profile = std::numeric_limits<double>::infinity();
    double scale = 1.0;  // step multiplier, halved on rejection
    bool converged_here = false;
    bool fresh_anchor = true;
    std::uint64_t it = 0;

    while (it < cfg.max_iters) {
        if (!fresh_anchor && it % cfg.anchor_interval == 0) {
            reanchor();
            rss = rss_a;
            value = gaussian_nll(z, rss, sigma);
            result.trace.push_back({it, value, sigma});
            fresh_anchor = true;
        }

        const double sigma_hat = std::max(cfg.sigma_floor, std::sqrt(std::max(0.0, rss) / zd));
        const double profile = gaussian_nll(z, std::max(0.0, rss), sigma_hat);
        if (profile < best_profile) {
            best_profile = profile;
            best_theta = theta;
        }

        if (grad_norm(c, std::max(0.0, rss), sigma) <= cfg.grad_tol) {
            if (fresh_anchor) {
                converged_here = true;
                break;
            }
            // Confirm on exact sums before stopping.
            reanchor();
            rss = rss_a;
            value = gaussian_nll(z, rss, sigma);
            fresh_anchor = true;
            continue;
        }

        const double eta = cfg.step_size * scale;
        const double s2 = sigma * sigma;
        for (std::size_t i = 0; i < k; ++i) theta_try[i] = theta[i] - eta * (c[i] / s2);
        const double g_sigma = zd / sigma - std::max(0.0, rss) / (s2 * sigma);
        const double sigma_try = std::max(sigma - eta * g_sigma, cfg.sigma_floor);
        const double rss_try = sums_at(theta_try, c_try);
        ++it;

        // Change in nll from the current point, free of anchor cancellation.
        double d_rss = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double di = theta_try[i] - theta[i];
            double gi = 0.0;
            for (std::size_t j = 0; j < k; ++j) gi += g_mat[i * k + j] * (theta_try[j] - theta[j]);
            d_rss += di * (2.0 * c[i] + gi);
        }
        const double r0 = std::max(0.0, rss);
        const double ds = sigma_try - sigma;
        const double st2 = sigma_try * sigma_try;
        const double d_value = zd * std::log1p(ds / sigma) - r0 * 0.5 * ds * (sigma + sigma_try) / (s2 * st2) +
                               d_rss / (2.0 * st2);

        if (!std::isfinite(rss_try) || !(d_value <= 0.0)) {
            ++result.rejected;
            scale *= 0.5;
            if (scale < 0x1p-60) break;  // no descent left at working precision
            continue;
        }
        if (theta_try == theta && sigma_try == sigma) break;  // fixed point at working precision
        theta.swap(theta_try);
        c.swap(c_try);
        sigma = sigma_try;
        rss = rss_try;
        value = value_of(rss_try, sigma_try);
        scale = std::min(1.0, scale * 2.0);
        fresh_anchor = false;
        // Large cancellation against the anchor loses digits; refresh early.
        if (rss < 1e-8 * rss_a) {
            reanchor();
            rss = rss_a;
            value = gaussian_nll(z, rss, sigma);
            fresh_anchor = true;
        }
    }

    std::vector<double> c_final(k);
    double rss_final = 0.0;
    if (converged_here) {
        rss_final = rss_a;
        c_final = c_a;
    } else {
        theta = best_theta;
        rss_final = exact_sums(data, theta, c_final);
        sigma = std::max(cfg.sigma_floor, std::sqrt(rss_final / zd));
    }
    result.params = data.params_of(theta, sigma);
    result.final_nll = gaussian_nll(z, rss_final, sigma);
    if (!std::isfinite(result.final_nll)) throw Error(Errc::Diverged, "final negative log-likelihood is non-finite");
    result.grad_norm = grad_norm(c_final, rss_final, sigma);
    result.converged = result.grad_norm <= cfg.grad_tol;
    result.iters = it;
    return result;
}

FitResult fit_ample(const FitDataset& data, const FitConfig& cfg) {
    require_kind(data, ModelKind::Ample);
    return fit(data, cfg);
}

FitResult fit_ci(const FitDataset& data, const FitConfig& cfg) {
    require_kind(data, ModelKind::Ci);
    return fit(data, cfg);
}

FitResult fit_abg(const FitDataset& data, const FitConfig& cfg) {
    require_kind(data, ModelKind::Abg);
    return fit(data, cfg);
}

CiParams fit_ci_closed_form(const FitDataset& data) {
    require_kind(data, ModelKind::Ci);
    if (data.empty()) throw Error(Errc::EmptyDataset, "no data points");
    const auto b = data.column(0);
    const auto a = data.target();
    double ab = 0.0;
    double bb = 0.0;
    for (std::size_t z = 0; z < data.size(); ++z) {
        ab += a[z] * b[z];
        bb += b[z] * b[z];
    }
    if (!(bb > 0.0)) throw Error(Errc::DegenerateDesign, "every point lies at the reference distance");
    const double n = ab / bb;
    double rss = 0.0;
    for (std::size_t z = 0; z < data.size(); ++z) {
        const double r = a[z] - n * b[z];
        rss += r * r;
    }
    return {n, std::sqrt(rss / static_cast<double>(data.size())), data.d0()};
}

}  // namespace ample
