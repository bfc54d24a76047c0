// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA kernels. The soft-DTW recursions run along anti-diagonals: every
// cell on one anti-diagonal depends only on the two previous ones, so four
// cells are processed per vector. exp/log come from vectorized Cephes-style
// rational approximations (~1 ulp); equivalence with the scalar backend is
// asserted by tests at tight tolerances, not assumed.
//
// This translation unit is compiled with -mavx2 -mfma and must only be
// entered after a runtime CPU check (see dispatch.cpp).

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "aquaclust/kernels.hpp"

namespace aquaclust::kernels::avx2 {

namespace {

// ---- vectorized exp ---------------------------------------------------------

// exp via x = n*ln2 + r, e^r from a Pade approximation (Cephes exp.c
// coefficients), 2^n spliced into the exponent bits.
inline __m256d vexp_pd(__m256d x) {
    const __m256d exp_hi = _mm256_set1_pd(709.782712893383996843);
    const __m256d exp_lo = _mm256_set1_pd(-708.396418532264078749);
    const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);

    const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
    const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
    const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
    const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
    const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
    const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
    const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);

    const __m256d underflow = _mm256_cmp_pd(x, exp_lo, _CMP_LT_OQ);
    __m256d xc = _mm256_min_pd(_mm256_max_pd(x, exp_lo), exp_hi);

    // n = nearest integer to x * log2(e)
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(xc, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);

    // r = x - n*ln2, split multiplier for extra precision
    __m256d r = _mm256_fnmadd_pd(n, c1, xc);
    r = _mm256_fnmadd_pd(n, c2, r);

    const __m256d rr = _mm256_mul_pd(r, r);
    __m256d px = _mm256_fmadd_pd(p0, rr, p1);
    px = _mm256_fmadd_pd(px, rr, p2);
    px = _mm256_mul_pd(px, r);
    __m256d qx = _mm256_fmadd_pd(q0, rr, q1);
    qx = _mm256_fmadd_pd(qx, rr, q2);
    qx = _mm256_fmadd_pd(qx, rr, q3);

    // e^r = 1 + 2*px / (qx - px)
    const __m256d e =
        _mm256_add_pd(_mm256_set1_pd(1.0),
                      _mm256_div_pd(_mm256_add_pd(px, px), _mm256_sub_pd(qx, px)));

    // scale by 2^n through the exponent field
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i biased = _mm256_add_epi64(n64, _mm256_set1_epi64x(1023));
    const __m256d pow2n = _mm256_castsi256_pd(_mm256_slli_epi64(biased, 52));

    __m256d result = _mm256_mul_pd(e, pow2n);
    result = _mm256_andnot_pd(underflow, result);  // exact zero below exp_lo
    return result;
}

// ---- vectorized log ---------------------------------------------------------

// log via mantissa/exponent split, rational approximation of log(1+z) on
// [sqrt(0.5)-1, sqrt(2)-1] (Cephes log.c coefficients). Positive finite
// inputs only; the DP feeds it values in [1, 3].
inline __m256d vlog_pd(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d half = _mm256_set1_pd(0.5);
    const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
    const __m256d min_normal = _mm256_set1_pd(2.2250738585072014e-308);

    const __m256d lp0 = _mm256_set1_pd(1.01875663804580931796e-4);
    const __m256d lp1 = _mm256_set1_pd(4.97494994976747001425e-1);
    const __m256d lp2 = _mm256_set1_pd(4.70579119878881725854e0);
    const __m256d lp3 = _mm256_set1_pd(1.44989225341610930846e1);
    const __m256d lp4 = _mm256_set1_pd(1.79368678507819816313e1);
    const __m256d lp5 = _mm256_set1_pd(7.70838733755885391666e0);
    const __m256d lq0 = _mm256_set1_pd(1.12873587189167450590e1);
    const __m256d lq1 = _mm256_set1_pd(4.52279145837532221105e1);
    const __m256d lq2 = _mm256_set1_pd(8.29875266912776603211e1);
    const __m256d lq3 = _mm256_set1_pd(7.11544750618563894466e1);
    const __m256d lq4 = _mm256_set1_pd(2.31251620126765340583e1);

    // upscale denormals so the exponent extraction below is valid
    const __m256d is_denormal = _mm256_cmp_pd(x, min_normal, _CMP_LT_OQ);
    const __m256d upscaled = _mm256_mul_pd(x, _mm256_set1_pd(0x1.0p54));
    x = _mm256_blendv_pd(x, upscaled, is_denormal);
    const __m256d e_bias =
        _mm256_blendv_pd(_mm256_setzero_pd(), _mm256_set1_pd(-54.0), is_denormal);

    const __m256i bits = _mm256_castpd_si256(x);

    // exponent as double: shift into the low 32 bits of each lane, compress
    const __m256i shifted = _mm256_srli_epi64(bits, 52);
    const __m256i pack_idx = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    const __m128i exp32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(shifted, pack_idx));
    __m256d e = _mm256_sub_pd(_mm256_cvtepi32_pd(exp32), _mm256_set1_pd(1022.0));
    e = _mm256_add_pd(e, e_bias);

    // mantissa in [0.5, 1)
    const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffll);
    const __m256i half_bits = _mm256_set1_epi64x(0x3fe0000000000000ll);
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

    // fold into [sqrt(0.5), sqrt(2))
    const __m256d below = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
    m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), below);
    e = _mm256_sub_pd(e, _mm256_and_pd(below, one));

    const __m256d z = _mm256_sub_pd(m, one);
    const __m256d zz = _mm256_mul_pd(z, z);

    __m256d p = _mm256_fmadd_pd(lp0, z, lp1);
    p = _mm256_fmadd_pd(p, z, lp2);
    p = _mm256_fmadd_pd(p, z, lp3);
    p = _mm256_fmadd_pd(p, z, lp4);
    p = _mm256_fmadd_pd(p, z, lp5);
    __m256d q = _mm256_add_pd(z, lq0);  // monic
    q = _mm256_fmadd_pd(q, z, lq1);
    q = _mm256_fmadd_pd(q, z, lq2);
    q = _mm256_fmadd_pd(q, z, lq3);
    q = _mm256_fmadd_pd(q, z, lq4);

    __m256d y = _mm256_mul_pd(_mm256_mul_pd(z, zz), _mm256_div_pd(p, q));
    y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(half, zz, y);

    __m256d result = _mm256_add_pd(z, y);
    result = _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), result);
    return result;
}

inline double softmin3_scalar(double a, double b, double c, double gamma, double inv_gamma) {
    const double mn = std::min(a, std::min(b, c));
    const double t = std::exp((mn - a) * inv_gamma) + std::exp((mn - b) * inv_gamma) +
                     std::exp((mn - c) * inv_gamma);
    return mn - gamma * std::log(t);
}

}  // namespace

void vexp4(const double* x, double* out) {
    _mm256_storeu_pd(out, vexp_pd(_mm256_loadu_pd(x)));
}

void vlog4(const double* x, double* out) {
    _mm256_storeu_pd(out, vlog_pd(_mm256_loadu_pd(x)));
}

double sq_l2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    // horizontal sum
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_add_pd(lo, hi);
    double total = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        total += d * d;
    }
    return total;
}

void cost_sq_euclid(const double* x, std::size_t m, const double* y, std::size_t n, double* d) {
    for (std::size_t i = 0; i < m; ++i) {
        const __m256d xi = _mm256_set1_pd(x[i]);
        double* row = d + i * n;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const __m256d diff = _mm256_sub_pd(xi, _mm256_loadu_pd(y + j));
            _mm256_storeu_pd(row + j, _mm256_mul_pd(diff, diff));
        }
        for (; j < n; ++j) {
            const double diff = x[i] - y[j];
            row[j] = diff * diff;
        }
    }
}

void cost_absolute(const double* x, std::size_t m, const double* y, std::size_t n, double* d) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    for (std::size_t i = 0; i < m; ++i) {
        const __m256d xi = _mm256_set1_pd(x[i]);
        double* row = d + i * n;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            const __m256d diff = _mm256_sub_pd(xi, _mm256_loadu_pd(y + j));
            _mm256_storeu_pd(row + j, _mm256_andnot_pd(sign_mask, diff));
        }
        for (; j < n; ++j) {
            row[j] = std::fabs(x[i] - y[j]);
        }
    }
}

double sum(const double* a, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(a + i));
    }
    __m128d lo = _mm256_castpd256_pd128(acc);
    __m128d hi = _mm256_extractf128_pd(acc, 1);
    lo = _mm_add_pd(lo, hi);
    double total = _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
    for (; i < n; ++i) total += a[i];
    return total;
}

void min_max(const double* a, std::size_t n, double& mn, double& mx) {
    std::size_t i = 0;
    double lo_s = a[0];
    double hi_s = a[0];
    if (n >= 4) {
        __m256d lo = _mm256_loadu_pd(a);
        __m256d hi = lo;
        for (i = 4; i + 4 <= n; i += 4) {
            const __m256d v = _mm256_loadu_pd(a + i);
            lo = _mm256_min_pd(lo, v);
            hi = _mm256_max_pd(hi, v);
        }
        __m128d l = _mm_min_pd(_mm256_castpd256_pd128(lo), _mm256_extractf128_pd(lo, 1));
        __m128d h = _mm_max_pd(_mm256_castpd256_pd128(hi), _mm256_extractf128_pd(hi, 1));
        lo_s = _mm_cvtsd_f64(_mm_min_sd(l, _mm_unpackhi_pd(l, l)));
        hi_s = _mm_cvtsd_f64(_mm_max_sd(h, _mm_unpackhi_pd(h, h)));
    }
    for (; i < n; ++i) {
        lo_s = std::min(lo_s, a[i]);
        hi_s = std::max(hi_s, a[i]);
    }
    mn = lo_s;
    mx = hi_s;
}

void sdtw_forward(const double* cost, std::size_t m, std::size_t n, double gamma, double* acc) {
    const std::size_t w = n + 1;
    const double inv_gamma = 1.0 / gamma;
    const __m256d ig = _mm256_set1_pd(inv_gamma);
    const __m256d g = _mm256_set1_pd(gamma);

    acc[0] = 0.0;
    for (std::size_t j = 1; j <= n; ++j) acc[j] = kAccBorder;
    for (std::size_t i = 1; i <= m; ++i) acc[i * w] = kAccBorder;

    // diagonal-rolling buffers indexed by row i; border value everywhere a
    // diagonal has no cell for that row
    std::vector<double> buf(3 * (m + 8), kAccBorder);
    double* prev2 = buf.data();           // diagonal d-2
    double* prev1 = prev2 + (m + 8);      // diagonal d-1
    double* cur = prev1 + (m + 8);        // diagonal d
    prev2[0] = 0.0;                       // r(0,0)

    const int stride_cost = static_cast<int>(n) - 1;
    const __m128i cost_step =
        _mm_setr_epi32(0, stride_cost, 2 * stride_cost, 3 * stride_cost);

    double lanes[4];
    for (std::size_t d = 2; d <= m + n; ++d) {
        const std::size_t lo = d > n ? d - n : 1;
        const std::size_t hi = std::min(m, d - 1);
        std::fill(cur, cur + m + 2, kAccBorder);

        std::size_t i = lo;
        for (; i + 4 <= hi + 1; i += 4) {
            const __m256d a = _mm256_loadu_pd(prev2 + i - 1);  // r(i-1, j-1)
            const __m256d b = _mm256_loadu_pd(prev1 + i - 1);  // r(i-1, j)
            const __m256d c = _mm256_loadu_pd(prev1 + i);      // r(i, j-1)

            const int cost_base = static_cast<int>((i - 1) * n + (d - i - 1));
            const __m128i idx = _mm_add_epi32(_mm_set1_epi32(cost_base), cost_step);
            const __m256d delta = _mm256_i32gather_pd(cost, idx, 8);

            const __m256d mn = _mm256_min_pd(a, _mm256_min_pd(b, c));
            const __m256d ea = vexp_pd(_mm256_mul_pd(_mm256_sub_pd(mn, a), ig));
            const __m256d eb = vexp_pd(_mm256_mul_pd(_mm256_sub_pd(mn, b), ig));
            const __m256d ec = vexp_pd(_mm256_mul_pd(_mm256_sub_pd(mn, c), ig));
            const __m256d t = _mm256_add_pd(ea, _mm256_add_pd(eb, ec));
            const __m256d soft = _mm256_sub_pd(mn, _mm256_mul_pd(g, vlog_pd(t)));
            const __m256d r = _mm256_add_pd(delta, soft);

            _mm256_storeu_pd(cur + i, r);
            _mm256_storeu_pd(lanes, r);
            for (int l = 0; l < 4; ++l) {
                const std::size_t ii = i + static_cast<std::size_t>(l);
                acc[ii * w + (d - ii)] = lanes[l];
            }
        }
        for (; i <= hi; ++i) {
            const double r = cost[(i - 1) * n + (d - i - 1)] +
                             softmin3_scalar(prev2[i - 1], prev1[i - 1], prev1[i], gamma, inv_gamma);
            cur[i] = r;
            acc[i * w + (d - i)] = r;
        }

        double* recycled = prev2;
        prev2 = prev1;
        prev1 = cur;
        cur = recycled;
    }
}

void sdtw_backward(const double* cost, const double* acc, std::size_t m, std::size_t n,
                   double gamma, double* expect) {
    const std::size_t w = n + 1;
    const double inv_gamma = 1.0 / gamma;
    const __m256d ig = _mm256_set1_pd(inv_gamma);

    // rolling buffers over reverse anti-diagonals; zero means "no cell"
    std::vector<double> buf(3 * (m + 8), 0.0);
    double* next1 = buf.data();       // diagonal d+1
    double* next2 = next1 + (m + 8);  // diagonal d+2
    double* cur = next2 + (m + 8);    // diagonal d

    const int stride_cost = static_cast<int>(n) - 1;
    const int stride_acc = static_cast<int>(n);
    const __m128i cost_step =
        _mm_setr_epi32(0, stride_cost, 2 * stride_cost, 3 * stride_cost);
    const __m128i acc_step = _mm_setr_epi32(0, stride_acc, 2 * stride_acc, 3 * stride_acc);

    double lanes[4];
    for (std::size_t d = m + n; d >= 2; --d) {
        std::fill(cur, cur + m + 2, 0.0);

        // corner and edge cells have fewer than three successors
        if (d == m + n) {
            cur[m] = 1.0;
            expect[(m - 1) * n + (n - 1)] = 1.0;
        } else {
            if (d >= m + 1 && d - m <= n - 1) {  // last row, j < n
                const std::size_t j = d - m;
                const double t =
                    (acc[m * w + j + 1] - acc[m * w + j] - cost[(m - 1) * n + j]) * inv_gamma;
                const double e = next1[m] * std::exp(t);
                cur[m] = e;
                expect[(m - 1) * n + (j - 1)] = e;
            }
            if (d >= n + 1 && d - n <= m - 1) {  // last column, i < m
                const std::size_t i = d - n;
                const double t =
                    (acc[(i + 1) * w + n] - acc[i * w + n] - cost[i * n + (n - 1)]) * inv_gamma;
                const double e = next1[i + 1] * std::exp(t);
                cur[i] = e;
                expect[(i - 1) * n + (n - 1)] = e;
            }
        }

        // interior cells: i < m and j < n, all three successors valid
        const std::size_t lo = d > n ? d - n + 1 : 1;
        const std::size_t hi = std::min(m - 1, d - 1);
        std::size_t i = lo;
        if (m >= 2 && n >= 2 && lo <= hi) {
            for (; i + 4 <= hi + 1; i += 4) {
                const int ci = static_cast<int>(i);
                const __m128i row_off = _mm_add_epi32(
                    _mm_set1_epi32(ci * stride_acc), acc_step);
                const __m256d r_ij =
                    _mm256_i32gather_pd(acc, _mm_add_epi32(row_off, _mm_set1_epi32(static_cast<int>(d))), 8);
                const __m256d r_dn = _mm256_i32gather_pd(
                    acc, _mm_add_epi32(row_off, _mm_set1_epi32(static_cast<int>(d + n + 1))), 8);
                const __m256d r_rt = _mm256_i32gather_pd(
                    acc, _mm_add_epi32(row_off, _mm_set1_epi32(static_cast<int>(d + 1))), 8);
                const __m256d r_dg = _mm256_i32gather_pd(
                    acc, _mm_add_epi32(row_off, _mm_set1_epi32(static_cast<int>(d + n + 2))), 8);

                const __m128i cost_off =
                    _mm_add_epi32(_mm_set1_epi32(ci * stride_cost), cost_step);
                const __m256d c_dn = _mm256_i32gather_pd(
                    cost, _mm_add_epi32(cost_off, _mm_set1_epi32(static_cast<int>(d - 1))), 8);
                const __m256d c_rt = _mm256_i32gather_pd(
                    cost,
                    _mm_add_epi32(cost_off,
                                  _mm_set1_epi32(static_cast<int>(d) - static_cast<int>(n))),
                    8);
                const __m256d c_dg = _mm256_i32gather_pd(
                    cost, _mm_add_epi32(cost_off, _mm_set1_epi32(static_cast<int>(d))), 8);

                const __m256d a =
                    vexp_pd(_mm256_mul_pd(_mm256_sub_pd(_mm256_sub_pd(r_dn, r_ij), c_dn), ig));
                const __m256d b =
                    vexp_pd(_mm256_mul_pd(_mm256_sub_pd(_mm256_sub_pd(r_rt, r_ij), c_rt), ig));
                const __m256d c =
                    vexp_pd(_mm256_mul_pd(_mm256_sub_pd(_mm256_sub_pd(r_dg, r_ij), c_dg), ig));

                const __m256d e_dn = _mm256_loadu_pd(next1 + i + 1);
                const __m256d e_rt = _mm256_loadu_pd(next1 + i);
                const __m256d e_dg = _mm256_loadu_pd(next2 + i + 1);

                __m256d e = _mm256_mul_pd(a, e_dn);
                e = _mm256_fmadd_pd(b, e_rt, e);
                e = _mm256_fmadd_pd(c, e_dg, e);

                _mm256_storeu_pd(cur + i, e);
                _mm256_storeu_pd(lanes, e);
                for (int l = 0; l < 4; ++l) {
                    const std::size_t ii = i + static_cast<std::size_t>(l);
                    expect[(ii - 1) * n + (d - ii - 1)] = lanes[l];
                }
            }
            for (; i <= hi; ++i) {
                const std::size_t j = d - i;
                const double r_ij = acc[i * w + j];
                const double a =
                    std::exp((acc[(i + 1) * w + j] - r_ij - cost[i * n + (j - 1)]) * inv_gamma);
                const double b =
                    std::exp((acc[i * w + j + 1] - r_ij - cost[(i - 1) * n + j]) * inv_gamma);
                const double c =
                    std::exp((acc[(i + 1) * w + j + 1] - r_ij - cost[i * n + j]) * inv_gamma);
                const double e =
                    a * next1[i + 1] + b * next1[i] + c * next2[i + 1];
                cur[i] = e;
                expect[(i - 1) * n + (j - 1)] = e;
            }
        }

        double* recycled = next2;
        next2 = next1;
        next1 = cur;
        cur = recycled;
    }
}

}  // namespace aquaclust::kernels::avx2
