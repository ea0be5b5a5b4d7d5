// Copyright (C) 2026 The AMPLE Toolkit Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <atomic>

#include "ample/kernels.hpp"

namespace ample::kernels {

namespace {

bool cpu_supports(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(AMPLE_HAVE_AVX2)
            return __builtin_cpu_supports("avx2") != 0;
#else
            return false;
#endif
        case Isa::Neon:
#if defined(AMPLE_HAVE_NEON)
            return true;  // mandatory on AArch64
#else
            return false;
#endif
    }
    return false;
}

std::atomic<Isa>& active_slot() noexcept {
    static std::atomic<Isa> slot{best_isa()};
    return slot;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "?";
}

const KernelTable* table(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return &detail::kScalarTable;
        case Isa::Avx2:
#if defined(AMPLE_HAVE_AVX2)
            return &detail::kAvx2Table;
#else
            return nullptr;
#endif
        case Isa::Neon:
#if defined(AMPLE_HAVE_NEON)
            return &detail::kNeonTable;
#else
            return nullptr;
#endif
    }
    return nullptr;
}

bool available(Isa isa) noexcept { return table(isa) != nullptr && cpu_supports(isa); }

Isa best_isa() noexcept {
    if (available(Isa::Avx2)) return Isa::Avx2;
    if (available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

const KernelTable& active() noexcept { return *table(active_slot().load(std::memory_order_relaxed)); }

Isa active_isa() noexcept { return active_slot().load(std::memory_order_relaxed); }

bool set_active(Isa isa) noexcept {
    if (!available(isa)) return false;
    active_slot().store(isa, std::memory_order_relaxed);
    return true;
}

}  // namespace ample::kernels
