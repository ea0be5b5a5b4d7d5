// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

// Data-parallel inner loops over points. Feature matrices are column-major:
// `cols[k]` points at Z contiguous values of feature k.
//
// Every reduction uses the same 4-lane striped order: point z accumulates into
// lane z % 4 over the largest multiple-of-4 prefix, lanes combine as
// (l0 + l1) + (l2 + l3), then the remaining points are added in index order.
// The scalar table follows that order literally, so all tables agree bit for
// bit as long as the build does not contract multiply-adds.

namespace ample::kernels {

inline constexpr std::size_t kMaxFeatures = 12;

struct ErrorSums {
    double sum_sq = 0.0;
    double sum_abs = 0.0;
};

struct KernelTable {
    // r_z = sum_k theta[k] * cols[k][z] - y[z]; c[k] = sum_z r_z * cols[k][z];
    // returns sum_z r_z^2.
    double (*residual_sums)(const double* const* cols, std::size_t k, const double* y, std::size_t z,
                            const double* theta, double* c);
    // Full symmetric Gram matrix, row-major k x k.
    void (*gram)(const double* const* cols, std::size_t k, std::size_t z, double* g);
    // out[z] = sum_k theta[k] * cols[k][z] (+ offset[z] when offset != nullptr).
    void (*linear_predict)(const double* const* cols, std::size_t k, std::size_t z, const double* theta,
                           const double* offset, double* out);
    ErrorSums (*error_sums)(const double* pred, const double* ref, std::size_t z);
    // Number of points where pred and ref lie on the same side of lt
    // (equal to lt on both sides counts as the same side).
    std::size_t (*threshold_agreement)(const double* pred, const double* ref, std::size_t z, double lt);
};

enum class Isa : std::uint8_t { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

/// Table for an instruction set, or nullptr when it was not compiled in.
const KernelTable* table(Isa isa) noexcept;

/// Compiled in and supported by the running CPU.
bool available(Isa isa) noexcept;

Isa best_isa() noexcept;

/// Table used by the library; starts at best_isa().
const KernelTable& active() noexcept;
Isa active_isa() noexcept;

/// Returns false (and changes nothing) when the ISA is unavailable.
bool set_active(Isa isa) noexcept;

namespace detail {
extern const KernelTable kScalarTable;
#if defined(AMPLE_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
#if defined(AMPLE_HAVE_NEON)
extern const KernelTable kNeonTable;
#endif
}  // namespace detail

}  // namespace ample::kernels
