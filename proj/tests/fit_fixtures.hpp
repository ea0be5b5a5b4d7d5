// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Random fitting inputs with long-double likelihood oracles.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <type_traits>
#include <vector>

#include "ample/fitting.hpp"
#include "oracles.hpp"

namespace oracle {

using namespace ample;

// Raw observations kept beside the dataset so oracles never read its columns.
struct AmpleObs {
    std::vector<std::vector<double>> D;
    std::vector<double> p, f, l;
};

struct DistObs {
    std::vector<double> f, d, l;
};

inline AmpleObs random_ample_obs(Rng& rng, std::size_t z, const AmpleParams& truth, double noise) {
    AmpleObs o;
    const int m = truth.region_count();
    for (std::size_t i = 0; i < z; ++i) {
        std::vector<double> w(static_cast<std::size_t>(m));
        for (auto& v : w) v = rng.uniform() < 0.3 ? 0.0 : rng.uniform() * 15.0;
        const double p = static_cast<double>(rng() % 5);
        const double f = 0.5 + rng.uniform() * 5.0;
        double mu = truth.A + truth.X * p + 10.0 * truth.gamma * std::log10(f);
        for (int k = 0; k < m; ++k) mu += truth.n[k] * w[k];
        Rng local = Rng::for_stream(rng(), i);
        o.D.push_back(w);
        o.p.push_back(p);
        o.f.push_back(f);
        o.l.push_back(mu + noise * (local.uniform() - 0.5) * std::sqrt(12.0));
    }
    return o;
}

inline FitDataset ample_dataset(const AmpleObs& o, int m) {
    auto ds = FitDataset::ample(m);
    for (std::size_t i = 0; i < o.l.size(); ++i) ds.add_ample(o.D[i], o.p[i], o.f[i], o.l[i]);
    return ds;
}

inline DistObs random_dist_obs(Rng& rng, std::size_t z, double d0) {
    DistObs o;
    for (std::size_t i = 0; i < z; ++i) {
        o.f.push_back(std::array{0.85, 2.1, 3.5, 5.0}[rng() % 4]);
        o.d.push_back(std::max(d0 * 1.01, std::pow(10.0, 1.0 + 2.0 * rng.uniform())));
        o.l.push_back(60.0 + 60.0 * rng.uniform());
    }
    return o;
}

inline long double ample_nll_oracle(const AmpleParams& p, const AmpleObs& o) {
    std::vector<long double> r;
    for (std::size_t i = 0; i < o.l.size(); ++i) {
        long double mu = p.A + static_cast<long double>(p.X) * o.p[i] + 10.0L * p.gamma * std::log10((long double)o.f[i]);
        for (std::size_t k = 0; k < p.n.size(); ++k) mu += static_cast<long double>(p.n[k]) * o.D[i][k];
        r.push_back(o.l[i] - mu);
    }
    return oracle::gaussian_nll(r, p.sigma);
}

inline long double ci_nll_oracle(const CiParams& p, const DistObs& o) {
    std::vector<long double> r;
    for (std::size_t i = 0; i < o.l.size(); ++i) {
        r.push_back(o.l[i] - oracle::fspl(o.f[i], p.d0) -
                    10.0L * p.n * std::log10(static_cast<long double>(o.d[i]) / p.d0));
    }
    return oracle::gaussian_nll(r, p.sigma);
}

inline long double abg_nll_oracle(const AbgParams& p, const DistObs& o) {
    std::vector<long double> r;
    for (std::size_t i = 0; i < o.l.size(); ++i) {
        r.push_back(o.l[i] - 10.0L * p.alpha * std::log10((long double)o.d[i]) - p.beta -
                    10.0L * p.gamma_abg * std::log10((long double)o.f[i]));
    }
    return oracle::gaussian_nll(r, p.sigma);
}

// Flattened parameter access in gradient order.
inline std::vector<double> flat(const ModelParams& mp) {
    return std::visit(
        [](const auto& p) -> std::vector<double> {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AmpleParams>) {
                std::vector<double> v{p.A};
                v.insert(v.end(), p.n.begin(), p.n.end());
                v.push_back(p.X);
                v.push_back(p.gamma);
                v.push_back(p.sigma);
                return v;
            } else if constexpr (std::is_same_v<T, CiParams>) {
                return {p.n, p.sigma};
            } else {
                return {p.alpha, p.beta, p.gamma_abg, p.sigma};
            }
        },
        mp);
}

inline ModelParams unflat(const ModelParams& like, const std::vector<double>& v) {
    return std::visit(
        [&](const auto& p) -> ModelParams {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, AmpleParams>) {
                AmpleParams q = p;
                q.A = v[0];
                for (std::size_t k = 0; k < q.n.size(); ++k) q.n[k] = v[1 + k];
                q.X = v[1 + q.n.size()];
                q.gamma = v[2 + q.n.size()];
                q.sigma = v[3 + q.n.size()];
                return q;
            } else if constexpr (std::is_same_v<T, CiParams>) {
                return CiParams{v[0], v[1], p.d0};
            } else {
                return AbgParams{v[0], v[1], v[2], v[3]};
            }
        },
        like);
}

// Central-difference derivative of `f` along each flattened parameter.
template <class Nll>
std::vector<long double> central_differences(const ModelParams& at, Nll&& f) {
    const auto x = flat(at);
    std::vector<long double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double h = 1e-6 * std::max(1.0, std::fabs(x[i]));
        auto xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        out[i] = (f(unflat(at, xp)) - f(unflat(at, xm))) / (2.0L * h);
    }
    return out;
}

// Relative gap between analytic and numeric components, floored at 1e-6 of the largest component.
inline double gradient_gap(const std::vector<double>& g, const std::vector<long double>& fd, std::size_t i) {
    double gmax = 0.0;
    for (double v : g) gmax = std::max(gmax, std::fabs(v));
    const double n = static_cast<double>(fd[i]);
    return std::fabs(g[i] - n) / std::max({std::fabs(g[i]), std::fabs(n), 1e-6 * gmax});
}

}  // namespace oracle
