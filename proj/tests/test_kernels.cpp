// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0
//
// Scalar/AVX2 equivalence for every dispatched kernel, plus accuracy checks
// for the vectorized exp/log against the libm references.

#include <cmath>
#include <vector>

#include <doctest.h>

#include "aquaclust/kernels.hpp"
#include "aquaclust/rng.hpp"

using namespace aquaclust;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo = -2.0, double hi = 2.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

double rel_diff(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

}  // namespace

TEST_CASE("dispatch reports a backend") {
    const kernels::Isa isa = kernels::active_isa();
    CHECK((isa == kernels::Isa::scalar || isa == kernels::Isa::avx2));
    CHECK(kernels::isa_name(isa) != nullptr);
}

#if AQUACLUST_HAVE_AVX2_BACKEND

TEST_CASE("vexp4 matches std::exp") {
    if (!kernels::avx2_supported()) return;
    std::vector<double> inputs;
    for (double x = -740.0; x <= 40.0; x += 0.37) inputs.push_back(x);
    inputs.insert(inputs.end(), {0.0, -0.0, 1.0, -1.0, -1e-12, 1e-12, -708.5, -709.9, -745.0});
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) inputs.push_back(rng.uniform(-60.0, 1.0));

    for (std::size_t i = 0; i + 4 <= inputs.size(); i += 4) {
        double out[4];
        kernels::avx2::vexp4(inputs.data() + i, out);
        for (int l = 0; l < 4; ++l) {
            const double expected = std::exp(inputs[i + l]);
            if (expected == 0.0 || inputs[i + l] < -708.396418532264078749) {
                CHECK(out[l] == 0.0);
            } else {
                CHECK(rel_diff(out[l], expected) < 1e-14);
            }
        }
    }

    // exp(0) must be exactly 1: the soft-min relies on the shifted term
    double zeros[4] = {0.0, 0.0, 0.0, 0.0};
    double out[4];
    kernels::avx2::vexp4(zeros, out);
    for (int l = 0; l < 4; ++l) CHECK(out[l] == 1.0);
}

TEST_CASE("vlog4 matches std::log") {
    if (!kernels::avx2_supported()) return;
    std::vector<double> inputs = {1.0, 2.0, 3.0, 0.5, 1e-300, 1e300, 1.0000001, 0.9999999};
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) inputs.push_back(std::exp(rng.uniform(-600.0, 600.0)));
    for (int i = 0; i < 2000; ++i) inputs.push_back(rng.uniform(1.0, 3.0));  // DP range

    for (std::size_t i = 0; i + 4 <= inputs.size(); i += 4) {
        double out[4];
        kernels::avx2::vlog4(inputs.data() + i, out);
        for (int l = 0; l < 4; ++l) {
            const double expected = std::log(inputs[i + l]);
            if (expected == 0.0) {
                CHECK(std::fabs(out[l]) < 1e-16);
            } else {
                CHECK(rel_diff(out[l], expected) < 1e-14);
            }
        }
    }
}

TEST_CASE("scalar and avx2 kernels agree") {
    if (!kernels::avx2_supported()) return;
    Rng rng(42);

    SUBCASE("sq_l2 and sum across lengths including remainders") {
        for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 13u, 48u, 100u, 257u}) {
            const auto a = random_vec(rng, n);
            const auto b = random_vec(rng, n);
            CHECK(rel_diff(kernels::scalar::sq_l2(a.data(), b.data(), n),
                           kernels::avx2::sq_l2(a.data(), b.data(), n)) < 1e-13);
            CHECK(rel_diff(kernels::scalar::sum(a.data(), n), kernels::avx2::sum(a.data(), n)) <
                  1e-12);
        }
    }

    SUBCASE("cost matrices are bit-identical") {
        for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{
                 {1, 1}, {3, 5}, {5, 3}, {48, 48}, {7, 31}}) {
            const auto x = random_vec(rng, m);
            const auto y = random_vec(rng, n);
            std::vector<double> ds(m * n);
            std::vector<double> dv(m * n);
            kernels::scalar::cost_sq_euclid(x.data(), m, y.data(), n, ds.data());
            kernels::avx2::cost_sq_euclid(x.data(), m, y.data(), n, dv.data());
            CHECK(ds == dv);
            kernels::scalar::cost_absolute(x.data(), m, y.data(), n, ds.data());
            kernels::avx2::cost_absolute(x.data(), m, y.data(), n, dv.data());
            CHECK(ds == dv);
        }
    }

    SUBCASE("min_max") {
        for (std::size_t n : {1u, 2u, 4u, 5u, 9u, 48u, 1000u}) {
            const auto a = random_vec(rng, n, -10.0, 10.0);
            double s_mn = 0.0;
            double s_mx = 0.0;
            double v_mn = 0.0;
            double v_mx = 0.0;
            kernels::scalar::min_max(a.data(), n, s_mn, s_mx);
            kernels::avx2::min_max(a.data(), n, v_mn, v_mx);
            CHECK(s_mn == v_mn);
            CHECK(s_mx == v_mx);
        }
    }

    SUBCASE("sdtw forward accumulators agree") {
        for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{
                 {1, 1}, {1, 7}, {7, 1}, {2, 2}, {5, 5}, {13, 9}, {48, 48}, {31, 64}}) {
            for (double gamma : {0.1, 1.0, 10.0}) {
                const auto x = random_vec(rng, m, 0.0, 1.0);
                const auto y = random_vec(rng, n, 0.0, 1.0);
                std::vector<double> cost(m * n);
                kernels::scalar::cost_sq_euclid(x.data(), m, y.data(), n, cost.data());

                std::vector<double> acc_s((m + 1) * (n + 1));
                std::vector<double> acc_v((m + 1) * (n + 1));
                kernels::scalar::sdtw_forward(cost.data(), m, n, gamma, acc_s.data());
                kernels::avx2::sdtw_forward(cost.data(), m, n, gamma, acc_v.data());
                for (std::size_t i = 0; i < acc_s.size(); ++i) {
                    CHECK(rel_diff(acc_s[i], acc_v[i]) < 1e-11);
                }
            }
        }
    }

    SUBCASE("sdtw backward expectations agree") {
        for (auto [m, n] : std::vector<std::pair<std::size_t, std::size_t>>{
                 {1, 1}, {1, 6}, {6, 1}, {2, 2}, {5, 5}, {13, 9}, {48, 48}, {17, 33}}) {
            for (double gamma : {0.1, 1.0, 10.0}) {
                const auto x = random_vec(rng, m, 0.0, 1.0);
                const auto y = random_vec(rng, n, 0.0, 1.0);
                std::vector<double> cost(m * n);
                kernels::scalar::cost_sq_euclid(x.data(), m, y.data(), n, cost.data());
                std::vector<double> acc((m + 1) * (n + 1));
                kernels::scalar::sdtw_forward(cost.data(), m, n, gamma, acc.data());

                std::vector<double> e_s(m * n);
                std::vector<double> e_v(m * n);
                kernels::scalar::sdtw_backward(cost.data(), acc.data(), m, n, gamma, e_s.data());
                kernels::avx2::sdtw_backward(cost.data(), acc.data(), m, n, gamma, e_v.data());
                for (std::size_t i = 0; i < e_s.size(); ++i) {
                    CHECK(std::fabs(e_s[i] - e_v[i]) < 1e-11);
                }
            }
        }
    }
}

#endif  // AQUACLUST_HAVE_AVX2_BACKEND

TEST_CASE("forced backend round-trip") {
    const kernels::Isa original = kernels::active_isa();
    CHECK(kernels::force_isa(kernels::Isa::scalar));
    CHECK(kernels::active_isa() == kernels::Isa::scalar);
    CHECK(kernels::force_isa(original));
    CHECK(kernels::active_isa() == original);
}
