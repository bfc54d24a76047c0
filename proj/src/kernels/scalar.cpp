// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0
//
// Scalar reference kernels. These define the semantics the AVX2 variants are
// tested against.

#include <algorithm>
#include <cmath>

#include "aquaclust/kernels.hpp"

namespace aquaclust::kernels::scalar {

double sq_l2(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

void cost_sq_euclid(const double* x, std::size_t m, const double* y, std::size_t n, double* d) {
    for (std::size_t i = 0; i < m; ++i) {
        const double xi = x[i];
        double* row = d + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            const double diff = xi - y[j];
            row[j] = diff * diff;
        }
    }
}

void cost_absolute(const double* x, std::size_t m, const double* y, std::size_t n, double* d) {
    for (std::size_t i = 0; i < m; ++i) {
        const double xi = x[i];
        double* row = d + i * n;
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = std::fabs(xi - y[j]);
        }
    }
}

double sum(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i];
    return acc;
}

void min_max(const double* a, std::size_t n, double& mn, double& mx) {
    double lo = a[0];
    double hi = a[0];
    for (std::size_t i = 1; i < n; ++i) {
        lo = std::min(lo, a[i]);
        hi = std::max(hi, a[i]);
    }
    mn = lo;
    mx = hi;
}

namespace {

// soft-min of three accumulator cells: mn - gamma * log(sum exp((mn-.)/gamma)).
// Max-shifted, so one exponent is exactly zero and the sentinel border values
// underflow to zero instead of producing NaNs.
inline double softmin3(double a, double b, double c, double gamma, double inv_gamma) {
    const double mn = std::min(a, std::min(b, c));
    const double t = std::exp((mn - a) * inv_gamma) + std::exp((mn - b) * inv_gamma) +
                     std::exp((mn - c) * inv_gamma);
    return mn - gamma * std::log(t);
}

}  // namespace

void sdtw_forward(const double* cost, std::size_t m, std::size_t n, double gamma, double* acc) {
    const std::size_t w = n + 1;
    const double inv_gamma = 1.0 / gamma;
    acc[0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j) acc[j] = kAccBorder;
    for (std::size_t i = 1; i <= m; ++i) acc[i * w] = kAccBorder;
    for (std::size_t i = 1; i <= m; ++i) {
        const double* cost_row = cost + (i - 1) * n;
        double* row = acc + i * w;
        const double* above = acc + (i - 1) * w;
        for (std::size_t j = 1; j <= n; ++j) {
            row[j] = cost_row[j - 1] + softmin3(above[j - 1], above[j], row[j - 1], gamma, inv_gamma);
        }
    }
}

void sdtw_backward(const double* cost, const double* acc, std::size_t m, std::size_t n,
                   double gamma, double* expect) {
    const std::size_t w = n + 1;
    const double inv_gamma = 1.0 / gamma;

    // expect(i,j) = sum over the three successor cells of expect(succ) *
    // exp((acc(succ) - acc(i,j) - cost(succ)) / gamma); successors outside the
    // grid contribute nothing. Arguments are <= 0 because the soft-min never
    // exceeds any of its inputs, so the exponentials cannot overflow.
    for (std::size_t i = m; i >= 1; --i) {
        for (std::size_t j = n; j >= 1; --j) {
            if (i == m && j == n) {
                expect[(i - 1) * n + (j - 1)] = 1.0;
                continue;
            }
            const double r_ij = acc[i * w + j];
            double e = 0.0;
            if (i + 1 <= m) {
                const double t = (acc[(i + 1) * w + j] - r_ij - cost[i * n + (j - 1)]) * inv_gamma;
                e += expect[i * n + (j - 1)] * std::exp(t);
            }
            if (j + 1 <= n) {
                const double t = (acc[i * w + (j + 1)] - r_ij - cost[(i - 1) * n + j]) * inv_gamma;
                e += expect[(i - 1) * n + j] * std::exp(t);
            }
            if (i + 1 <= m && j + 1 <= n) {
                const double t = (acc[(i + 1) * w + (j + 1)] - r_ij - cost[i * n + j]) * inv_gamma;
                e += expect[i * n + j] * std::exp(t);
            }
            expect[(i - 1) * n + (j - 1)] = e;
        }
    }
}

}  // namespace aquaclust::kernels::scalar
