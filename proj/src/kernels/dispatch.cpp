// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include <atomic>

#include "aquaclust/kernels.hpp"

namespace aquaclust::kernels {

#if AQUACLUST_HAVE_AVX2_BACKEND
bool avx2_supported() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

namespace {

Isa detect_isa() {
#if AQUACLUST_HAVE_AVX2_BACKEND
    if (avx2_supported()) return Isa::avx2;
#endif
    return Isa::scalar;
}

std::atomic<Isa> g_isa{detect_isa()};

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::avx2: return "avx2";
        case Isa::scalar: return "scalar";
    }
    return "scalar";
}

Isa active_isa() { return g_isa.load(std::memory_order_relaxed); }

bool force_isa(Isa isa) {
#if AQUACLUST_HAVE_AVX2_BACKEND
    if (isa == Isa::avx2 && !avx2_supported()) return false;
#else
    if (isa == Isa::avx2) return false;
#endif
    g_isa.store(isa, std::memory_order_relaxed);
    return true;
}

#if AQUACLUST_HAVE_AVX2_BACKEND
#define AQUACLUST_DISPATCH(fn, ...) \
    if (active_isa() == Isa::avx2) return avx2::fn(__VA_ARGS__); \
    return scalar::fn(__VA_ARGS__)
#else
#define AQUACLUST_DISPATCH(fn, ...) return scalar::fn(__VA_ARGS__)
#endif

double sq_l2(const double* a, const double* b, std::size_t n) {
    AQUACLUST_DISPATCH(sq_l2, a, b, n);
}

void cost_sq_euclid(const double* x, std::size_t m, const double* y, std::size_t n, double* d) {
    AQUACLUST_DISPATCH(cost_sq_euclid, x, m, y, n, d);
}

void cost_absolute(const double* x, std::size_t m, const double* y, std::size_t n, double* d) {
    AQUACLUST_DISPATCH(cost_absolute, x, m, y, n, d);
}

double sum(const double* a, std::size_t n) { AQUACLUST_DISPATCH(sum, a, n); }

void min_max(const double* a, std::size_t n, double& mn, double& mx) {
    AQUACLUST_DISPATCH(min_max, a, n, mn, mx);
}

void sdtw_forward(const double* cost, std::size_t m, std::size_t n, double gamma, double* acc) {
    AQUACLUST_DISPATCH(sdtw_forward, cost, m, n, gamma, acc);
}

void sdtw_backward(const double* cost, const double* acc, std::size_t m, std::size_t n,
                   double gamma, double* expect) {
    AQUACLUST_DISPATCH(sdtw_backward, cost, acc, m, n, gamma, expect);
}

}  // namespace aquaclust::kernels
