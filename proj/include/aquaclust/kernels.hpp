// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>

// Arithmetic inner loops behind the library: squared-Euclidean distances,
// pairwise cost matrices, reductions, and the soft-DTW forward/backward
// dynamic programs. Every kernel has a scalar reference implementation;
// on x86-64 an AVX2+FMA variant is compiled as well and selected at runtime.
// The scalar and vector variants are equivalence-tested against each other.
//
// Conventions shared by both backends:
//   - cost matrices are M x N row-major,
//   - soft-DTW accumulators are (M+1) x (N+1) row-major with r(0,0) = 0 and
//     a large finite sentinel on the remaining border cells,
//   - gamma is passed together with its precomputed reciprocal so both
//     backends perform the same multiply instead of a divide.

namespace aquaclust::kernels {

// Border sentinel for the soft-DTW accumulator. Large enough that
// exp(-sentinel / gamma) underflows to zero, small enough that sums of a few
// sentinels stay finite.
inline constexpr double kAccBorder = 1e30;

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);

// Backend chosen at startup (AVX2 when the CPU supports it).
Isa active_isa();

// Overrides the dispatched backend, e.g. for benchmarking. Returns false if
// the requested backend is unavailable on this machine.
bool force_isa(Isa isa);

// --- dispatched entry points -----------------------------------------------

// sum of (a[i] - b[i])^2
double sq_l2(const double* a, const double* b, std::size_t n);

// d[m*cols + n] = (x[m] - y[n])^2
void cost_sq_euclid(const double* x, std::size_t m, const double* y, std::size_t n, double* d);

// d[m*cols + n] = |x[m] - y[n]|
void cost_absolute(const double* x, std::size_t m, const double* y, std::size_t n, double* d);

double sum(const double* a, std::size_t n);

void min_max(const double* a, std::size_t n, double& mn, double& mx);

// Soft-DTW forward recursion. cost is m x n, acc is (m+1) x (n+1) and is
// fully written including the border. acc(m, n) holds the soft distance.
void sdtw_forward(const double* cost, std::size_t m, std::size_t n, double gamma, double* acc);

// Soft-DTW backward pass. Reads the cost matrix and a forward accumulator and
// writes the m x n matrix of soft alignment expectations (the gradient of the
// soft distance with respect to each cost entry).
void sdtw_backward(const double* cost, const double* acc, std::size_t m, std::size_t n,
                   double gamma, double* expect);

// --- scalar reference backend ----------------------------------------------

namespace scalar {
double sq_l2(const double* a, const double* b, std::size_t n);
void cost_sq_euclid(const double* x, std::size_t m, const double* y, std::size_t n, double* d);
void cost_absolute(const double* x, std::size_t m, const double* y, std::size_t n, double* d);
double sum(const double* a, std::size_t n);
void min_max(const double* a, std::size_t n, double& mn, double& mx);
void sdtw_forward(const double* cost, std::size_t m, std::size_t n, double gamma, double* acc);
void sdtw_backward(const double* cost, const double* acc, std::size_t m, std::size_t n,
                   double gamma, double* expect);
}  // namespace scalar

// --- AVX2 backend (x86-64 only) --------------------------------------------

#if defined(__x86_64__) || defined(_M_X64)
#define AQUACLUST_HAVE_AVX2_BACKEND 1

bool avx2_supported();

namespace avx2 {
double sq_l2(const double* a, const double* b, std::size_t n);
void cost_sq_euclid(const double* x, std::size_t m, const double* y, std::size_t n, double* d);
void cost_absolute(const double* x, std::size_t m, const double* y, std::size_t n, double* d);
double sum(const double* a, std::size_t n);
void min_max(const double* a, std::size_t n, double& mn, double& mx);
void sdtw_forward(const double* cost, std::size_t m, std::size_t n, double gamma, double* acc);
void sdtw_backward(const double* cost, const double* acc, std::size_t m, std::size_t n,
                   double gamma, double* expect);

// Vectorized exp/log used inside the DP kernels, exposed for accuracy tests.
// Both operate on 4 doubles at a time through plain arrays.
void vexp4(const double* x, double* out);
void vlog4(const double* x, double* out);
}  // namespace avx2
#else
#define AQUACLUST_HAVE_AVX2_BACKEND 0
#endif

}  // namespace aquaclust::kernels
