// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

// Reference implementations. Loops are written in the striped order shared
// with the vector tables; do not "simplify" them into plain sequential sums.

#include <cmath>

#include "ample/kernels.hpp"

namespace ample::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

inline double lane_total(const double (&acc)[kLanes]) { return (acc[0] + acc[1]) + (acc[2] + acc[3]); }

inline double point_mean(const double* const* cols, std::size_t k, const double* theta, std::size_t i) {
    double mu = theta[0] * cols[0][i];
    for (std::size_t j = 1; j < k; ++j) mu += theta[j] * cols[j][i];
    return mu;
}

double residual_sums(const double* const* cols, std::size_t k, const double* y, std::size_t z, const double* theta,
                     double* c) {
    const std::size_t body = z - z % kLanes;
    double rss[kLanes] = {};
    double cacc[kMaxFeatures][kLanes] = {};
    double tail_r[kLanes] = {};
    for (std::size_t i = 0; i < body; ++i) {
        const std::size_t lane = i % kLanes;
        const double r = point_mean(cols, k, theta, i) - y[i];
        rss[lane] += r * r;
        for (std::size_t j = 0; j < k; ++j) cacc[j][lane] += r * cols[j][i];
    }
    for (std::size_t i = body; i < z; ++i) tail_r[i - body] = point_mean(cols, k, theta, i) - y[i];

    double total = lane_total(rss);
    for (std::size_t i = body; i < z; ++i) total += tail_r[i - body] * tail_r[i - body];
    for (std::size_t j = 0; j < k; ++j) {
        double s = lane_total(cacc[j]);
        for (std::size_t i = body; i < z; ++i) s += tail_r[i - body] * cols[j][i];
        c[j] = s;
    }
    return total;
}

void gram(const double* const* cols, std::size_t k, std::size_t z, double* g) {
    const std::size_t body = z - z % kLanes;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a; b < k; ++b) {
            double acc[kLanes] = {};
            for (std::size_t i = 0; i < body; ++i) acc[i % kLanes] += cols[a][i] * cols[b][i];
            double s = lane_total(acc);
            for (std::size_t i = body; i < z; ++i) s += cols[a][i] * cols[b][i];
            g[a * k + b] = s;
            g[b * k + a] = s;
        }
    }
}

void linear_predict(const double* const* cols, std::size_t k, std::size_t z, const double* theta,
                    const double* offset, double* out) {
    for (std::size_t i = 0; i < z; ++i) {
        double mu = point_mean(cols, k, theta, i);
        if (offset != nullptr) mu += offset[i];
        out[i] = mu;
    }
}

ErrorSums error_sums(const double* pred, const double* ref, std::size_t z) {
    const std::size_t body = z - z % kLanes;
    double sq[kLanes] = {};
    double ab[kLanes] = {};
    for (std::size_t i = 0; i < body; ++i) {
        const double d = pred[i] - ref[i];
        sq[i % kLanes] += d * d;
        ab[i % kLanes] += std::fabs(d);
    }
    ErrorSums out{lane_total(sq), lane_total(ab)};
    for (std::size_t i = body; i < z; ++i) {
        const double d = pred[i] - ref[i];
        out.sum_sq += d * d;
        out.sum_abs += std::fabs(d);
    }
    return out;
}

std::size_t threshold_agreement(const double* pred, const double* ref, std::size_t z, double lt) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < z; ++i) {
        const bool same = (pred[i] > lt) == (ref[i] > lt) && (pred[i] < lt) == (ref[i] < lt);
        count += same ? 1 : 0;
    }
    return count;
}

}  // namespace

const KernelTable kScalarTable{residual_sums, gram, linear_predict, error_sums, threshold_agreement};

}  // namespace ample::kernels::detail
