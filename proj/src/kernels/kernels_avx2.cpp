// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

// AVX2 table. One __m256d register holds lanes 0..3 of the striped order, so
// the per-lane arithmetic is the scalar reference verbatim. Multiplies and
// adds stay separate (no FMA) to keep results identical.

#include <immintrin.h>

#include "ample/kernels.hpp"

namespace ample::kernels::detail {

namespace {

constexpr std::size_t kLanes = 4;

inline double lane_total(__m256d v) {
    alignas(32) double l[kLanes];
    _mm256_store_pd(l, v);
    return (l[0] + l[1]) + (l[2] + l[3]);
}

inline double point_mean(const double* const* cols, std::size_t k, const double* theta, std::size_t i) {
    double mu = theta[0] * cols[0][i];
    for (std::size_t j = 1; j < k; ++j) mu += theta[j] * cols[j][i];
    return mu;
}

inline __m256d block_mean(const double* const* cols, std::size_t k, const __m256d* th, std::size_t i) {
    __m256d mu = _mm256_mul_pd(th[0], _mm256_loadu_pd(cols[0] + i));
    for (std::size_t j = 1; j < k; ++j) mu = _mm256_add_pd(mu, _mm256_mul_pd(th[j], _mm256_loadu_pd(cols[j] + i)));
    return mu;
}

double residual_sums(const double* const* cols, std::size_t k, const double* y, std::size_t z, const double* theta,
                     double* c) {
    const std::size_t body = z - z % kLanes;
    __m256d th[kMaxFeatures];
    __m256d cacc[kMaxFeatures];
    for (std::size_t j = 0; j < k; ++j) {
        th[j] = _mm256_set1_pd(theta[j]);
        cacc[j] = _mm256_setzero_pd();
    }
    __m256d rss = _mm256_setzero_pd();
    for (std::size_t i = 0; i < body; i += kLanes) {
        const __m256d r = _mm256_sub_pd(block_mean(cols, k, th, i), _mm256_loadu_pd(y + i));
        rss = _mm256_add_pd(rss, _mm256_mul_pd(r, r));
        for (std::size_t j = 0; j < k; ++j) {
            cacc[j] = _mm256_add_pd(cacc[j], _mm256_mul_pd(r, _mm256_loadu_pd(cols[j] + i)));
        }
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
            __m256d acc = _mm256_setzero_pd();
            for (std::size_t i = 0; i < body; i += kLanes) {
                acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(cols[a] + i), _mm256_loadu_pd(cols[b] + i)));
            }
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
    __m256d th[kMaxFeatures];
    for (std::size_t j = 0; j < k; ++j) th[j] = _mm256_set1_pd(theta[j]);
    for (std::size_t i = 0; i < body; i += kLanes) {
        __m256d mu = block_mean(cols, k, th, i);
        if (offset != nullptr) mu = _mm256_add_pd(mu, _mm256_loadu_pd(offset + i));
        _mm256_storeu_pd(out + i, mu);
    }
    for (std::size_t i = body; i < z; ++i) {
        double mu = point_mean(cols, k, theta, i);
        if (offset != nullptr) mu += offset[i];
        out[i] = mu;
    }
}

ErrorSums error_sums(const double* pred, const double* ref, std::size_t z) {
    const std::size_t body = z - z % kLanes;
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d sq = _mm256_setzero_pd();
    __m256d ab = _mm256_setzero_pd();
    for (std::size_t i = 0; i < body; i += kLanes) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pred + i), _mm256_loadu_pd(ref + i));
        sq = _mm256_add_pd(sq, _mm256_mul_pd(d, d));
        ab = _mm256_add_pd(ab, _mm256_andnot_pd(sign_mask, d));
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
    const std::size_t body = z - z % kLanes;
    const __m256d t = _mm256_set1_pd(lt);
    std::size_t count = 0;
    for (std::size_t i = 0; i < body; i += kLanes) {
        const __m256d p = _mm256_loadu_pd(pred + i);
        const __m256d r = _mm256_loadu_pd(ref + i);
        const __m256d gt = _mm256_xor_pd(_mm256_cmp_pd(p, t, _CMP_GT_OQ), _mm256_cmp_pd(r, t, _CMP_GT_OQ));
        const __m256d lt_ = _mm256_xor_pd(_mm256_cmp_pd(p, t, _CMP_LT_OQ), _mm256_cmp_pd(r, t, _CMP_LT_OQ));
        const int mismatch = _mm256_movemask_pd(_mm256_or_pd(gt, lt_));
        count += kLanes - static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(mismatch)));
    }
    for (std::size_t i = body; i < z; ++i) {
        const bool same = (pred[i] > lt) == (ref[i] > lt) && (pred[i] < lt) == (ref[i] < lt);
        count += same ? 1 : 0;
    }
    return count;
}

}  // namespace

const KernelTable kAvx2Table{residual_sums, gram, linear_predict, error_sums, threshold_agreement};

}  // namespace ample::kernels::detail
