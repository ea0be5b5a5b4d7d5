// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

// AArch64 NEON table. Lanes 0,1 live in `lo` and lanes 2,3 in `hi`.

#include <arm_neon.h>

#include "ample/kernels.hpp"

namespace ample::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

struct Pair {
    float64x2_t lo;
    float64x2_t hi;
};

inline Pair zero() { return {vdupq_n_f64(0.0), vdupq_n_f64(0.0)}; }
inline Pair load(const double* p) { return {vld1q_f64(p), vld1q_f64(p + 2)}; }
inline Pair add(Pair a, Pair b) { return {vaddq_f64(a.lo, b.lo), vaddq_f64(a.hi, b.hi)}; }
inline Pair sub(Pair a, Pair b) { return {vsubq_f64(a.lo, b.lo), vsubq_f64(a.hi, b.hi)}; }
inline Pair mul(Pair a, Pair b) { return {vmulq_f64(a.lo, b.lo), vmulq_f64(a.hi, b.hi)}; }
inline Pair splat(double v) { return {vdupq_n_f64(v), vdupq_n_f64(v)}; }

inline double lane_total(Pair v) {
    return (vgetq_lane_f64(v.lo, 0) + vgetq_lane_f64(v.lo, 1)) + (vgetq_lane_f64(v.hi, 0) + vgetq_lane_f64(v.hi, 1));
}

inline double point_mean(const double* const* cols, std::size_t k, const double* theta, std::size_t i) {
    double mu = theta[0] * cols[0][i];
    for (std::size_t j = 1; j < k; ++j) mu += theta[j] * cols[j][i];
    return mu;
}

inline Pair block_mean(const double* const* cols, std::size_t k, const Pair* th, std::size_t i) {
    Pair mu = mul(th[0], load(cols[0] + i));
    for (std::size_t j = 1; j < k; ++j) mu = add(mu, mul(th[j], load(cols[j] + i)));
    return mu;
}

double residual_sums(const double* const* cols, std::size_t k, const double* y, std::size_t z, const double* theta,
                     double* c) {
    const std::size_t body = z - z % kLanes;
    Pair th[kMaxFeatures];
    Pair cacc[kMaxFeatures];
    for (std::size_t j = 0; j < k; ++j) {
        th[j] = splat(theta[j]);
        cacc[j] = zero();
    }
    Pair rss = zero();
    for (std::size_t i = 0; i < body; i += kLanes) {
        const Pair r = sub(block_mean(cols, k, th, i), load(y + i));
        rss = add(rss, mul(r, r));
        for (std::size_t j = 0; j < k; ++j) cacc[j] = add(cacc[j], mul(r, load(cols[j] + i)));
    }
    double tail_r[kLanes] = {};
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
            Pair acc = zero();
            for (std::size_t i = 0; i < body; i += kLanes) acc = add(acc, mul(load(cols[a] + i), load(cols[b] + i)));
            double s = lane_total(acc);
            for (std::size_t i = body; i < z; ++i) s += cols[a][i] * cols[b][i];
            g[a * k + b] = s;
            g[b * k + a] = s;
        }
    }
}

void linear_predict(const double* const* cols, std::size_t k, std::size_t z, const double* theta,
                    const double* offset, double* out) {
    const std::size_t body = z - z % kLanes;
    Pair th[kMaxFeatures];
    for (std::size_t j = 0; j < k; ++j) th[j] = splat(theta[j]);
    for (std::size_t i = 0; i < body; i += kLanes) {
        Pair mu = block_mean(cols, k, th, i);
        if (offset != nullptr) mu = add(mu, load(offset + i));
        vst1q_f64(out + i, mu.lo);
        vst1q_f64(out + i + 2, mu.hi);
    }
    for (std::size_t i = body; i < z; ++i) {
        double mu = point_mean(cols, k, theta, i);
        if (offset != nullptr) mu += offset[i];
        out[i] = mu;
    }
}

ErrorSums error_sums(const double* pred, const double* ref, std::size_t z) {
    const std::size_t body = z - z % kLanes;
    Pair sq = zero();
    Pair ab = zero();
    for (std::size_t i = 0; i < body; i += kLanes) {
        const Pair d = sub(load(pred + i), load(ref + i));
        sq = add(sq, mul(d, d));
        ab = add(ab, Pair{vabsq_f64(d.lo), vabsq_f64(d.hi)});
    }
    ErrorSums out{lane_total(sq), lane_total(ab)};
    for (std::size_t i = body; i < z; ++i) {
        const double d = pred[i] - ref[i];
        out.sum_sq += d * d;
        out.sum_abs += d < 0.0 ? -d : d;
    }
    return out;
}

std::size_t threshold_agreement(const double* pred, const double* ref, std::size_t z, double lt) {
    std::size_t count = 0;
    const std::size_t body = z - z % 2;
    const float64x2_t t = vdupq_n_f64(lt);
    for (std::size_t i = 0; i < body; i += 2) {
        const float64x2_t p = vld1q_f64(pred + i);
        const float64x2_t r = vld1q_f64(ref + i);
        const uint64x2_t gt = veorq_u64(vcgtq_f64(p, t), vcgtq_f64(r, t));
        const uint64x2_t ls = veorq_u64(vcltq_f64(p, t), vcltq_f64(r, t));
        const uint64x2_t bad = vorrq_u64(gt, ls);
        count += (vgetq_lane_u64(bad, 0) == 0 ? 1 : 0) + (vgetq_lane_u64(bad, 1) == 0 ? 1 : 0);
    }
    for (std::size_t i = body; i < z; ++i) {
        const bool same = (pred[i] > lt) == (ref[i] > lt) && (pred[i] < lt) == (ref[i] < lt);
        count += same ? 1 : 0;
    }
    return count;
}

}  // namespace

const KernelTable kNeonTable{residual_sums, gram, linear_predict, error_sums, threshold_agreement};

}  // namespace ample::kernels::detail
