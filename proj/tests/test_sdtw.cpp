// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include <stdexcept>
#include <chrono>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "aquaclust/rng.hpp"
#include "aquaclust/sdtw.hpp"

using namespace aquaclust;
using sdtw::InnerMetric;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t n, double lo = 0.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform(lo, hi);
    return v;
}

// central finite differences of the soft distance with respect to x
std::vector<double> fd_gradient(const std::vector<double>& x, const std::vector<double>& y,
                                double gamma, double step = 1e-5) {
    std::vector<double> grad(x.size());
    std::vector<double> probe = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        probe[i] = x[i] + step;
        const double up = sdtw::soft_dtw_value(probe, y, gamma);
        probe[i] = x[i] - step;
        const double down = sdtw::soft_dtw_value(probe, y, gamma);
        probe[i] = x[i];
        grad[i] = (up - down) / (2.0 * step);
    }
    return grad;
}

double inf_norm_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double mx = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mx = std::max(mx, std::fabs(a[i] - b[i]));
    return mx;
}

double inf_norm(const std::vector<double>& a) {
    double mx = 0.0;
    for (double v : a) mx = std::max(mx, std::fabs(v));
    return mx;
}

}  // namespace

TEST_CASE("cost matrix examples") {
    const std::vector<double> x{0.0};
    const std::vector<double> y{3.0};
    const auto single = sdtw::pairwise_cost_matrix(x, y);
    CHECK(single.values.at(0, 0) == 9.0);

    const std::vector<double> same{1.0, 2.0, 3.0};
    const auto diag = sdtw::pairwise_cost_matrix(same, same);
    for (std::size_t i = 0; i < 3; ++i) CHECK(diag.values.at(i, i) == 0.0);

    const std::vector<double> a{1.0, 2.0};
    const std::vector<double> b{1.0, 3.0};
    const auto hand = sdtw::pairwise_cost_matrix(a, b);
    CHECK(hand.values.at(0, 0) == 0.0);
    CHECK(hand.values.at(0, 1) == 4.0);
    CHECK(hand.values.at(1, 0) == 1.0);
    CHECK(hand.values.at(1, 1) == 1.0);

    CHECK_THROWS_AS(sdtw::pairwise_cost_matrix({}, b), std::invalid_argument);
}

TEST_CASE("soft_dtw single-pair degenerates to the point cost") {
    const std::vector<double> x{0.0};
    const std::vector<double> y{3.0};
    const auto result = sdtw::soft_dtw(x, y, 1.0);
    CHECK(result.value == 9.0);
    CHECK(result.value == result.accumulator.at(1, 1));
}

TEST_CASE("soft_dtw of two zero pairs equals -ln 3") {
    const std::vector<double> z{0.0, 0.0};
    const double v = sdtw::soft_dtw_value(z, z, 1.0);
    CHECK(v == doctest::Approx(-std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("self distance approaches zero from below as gamma -> 0") {
    Rng rng(19);
    const auto x = random_vec(rng, 5);
    const double v = sdtw::soft_dtw_value(x, x, 1e-3);
    CHECK(v < 0.0);
    CHECK(v > -0.01);
}

TEST_CASE("soft_dtw input validation") {
    const std::vector<double> x{1.0};
    CHECK_THROWS_AS(sdtw::soft_dtw(x, x, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sdtw::soft_dtw(x, x, -1.0), std::invalid_argument);
    const std::vector<double> bad{std::nan("")};
    CHECK_THROWS_AS(sdtw::soft_dtw(x, bad, 1.0), std::invalid_argument);
}

TEST_CASE("oracle: enumeration agrees with the recursion") {
    Rng rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t m = 1 + rng.next_index(5);
        const std::size_t n = 1 + rng.next_index(5);
        const auto x = random_vec(rng, m);
        const auto y = random_vec(rng, n);
        for (double gamma : {0.5, 1.0, 2.0}) {
            const double dp = sdtw::soft_dtw_value(x, y, gamma);
            const double brute = sdtw::brute_force_soft_dtw(x, y, gamma);
            CHECK(std::fabs(dp - brute) <= 1e-9);
        }
    }
}

TEST_CASE("oracle analytic cases") {
    const std::vector<double> z{0.0, 0.0};
    for (double gamma : {0.5, 1.0, 2.0}) {
        CHECK(sdtw::brute_force_soft_dtw(z, z, gamma) ==
              doctest::Approx(-gamma * std::log(3.0)).epsilon(1e-12));
    }

    // 1 x N grid has a single path: the row sum
    const std::vector<double> one{0.5};
    const std::vector<double> row{0.0, 1.0, 2.0};
    double row_sum = 0.0;
    for (double v : row) row_sum += (0.5 - v) * (0.5 - v);
    CHECK(sdtw::brute_force_soft_dtw(one, row, 1.0) == doctest::Approx(row_sum).epsilon(1e-12));
    CHECK(sdtw::enumerate_alignment_paths(1, 3).size() == 1);

    // Delannoy path counts
    CHECK(sdtw::enumerate_alignment_paths(2, 2).size() == 3);
    CHECK(sdtw::enumerate_alignment_paths(3, 3).size() == 13);
    CHECK(sdtw::enumerate_alignment_paths(4, 4).size() == 63);
    CHECK(sdtw::enumerate_alignment_paths(5, 5).size() == 321);
    CHECK(sdtw::enumerate_alignment_paths(6, 6).size() == 1683);
}

TEST_CASE("oracle rejects large instances") {
    const std::vector<double> big(7, 0.0);
    const std::vector<double> small(2, 0.0);
    CHECK_THROWS_WITH_AS(sdtw::brute_force_soft_dtw(big, small, 1.0),
                         "oracle restricted to tiny instances", std::invalid_argument);
}

TEST_CASE("gradient: single-pair analytic value") {
    const std::vector<double> x{0.0};
    const std::vector<double> y{3.0};
    const auto grad = sdtw::soft_dtw_gradient(x, y, 1.0);
    CHECK(grad.size() == 1);
    CHECK(grad[0] == doctest::Approx(-6.0).epsilon(1e-12));
}

TEST_CASE("gradient: constant self-alignment sums to zero") {
    const std::vector<double> x(6, 0.7);
    const auto grad = sdtw::soft_dtw_gradient(x, x, 1.0);
    double total = 0.0;
    for (double g : grad) total += g;
    CHECK(std::fabs(total) < 1e-10);
    const auto fd = fd_gradient(x, x, 1.0);
    CHECK(inf_norm_diff(grad, fd) < 1e-6);
}

TEST_CASE("gradient matches finite differences across gammas") {
    Rng rng(202);
    for (double gamma : {0.1, 1.0, 10.0}) {
        for (int trial = 0; trial < 10; ++trial) {
            const auto x = random_vec(rng, 4);
            const auto y = random_vec(rng, 4);
            const auto grad = sdtw::soft_dtw_gradient(x, y, gamma);
            const auto fd = fd_gradient(x, y, gamma);
            const double scale = std::max(inf_norm(fd), 1e-8);
            CHECK(inf_norm_diff(grad, fd) / scale <= 1e-4);
        }
    }
}

TEST_CASE("gradient rejects the absolute metric") {
    const std::vector<double> x{1.0, 2.0};
    CHECK_THROWS_WITH_AS(sdtw::soft_dtw_gradient(x, x, 1.0, InnerMetric::absolute),
                         "gradient requires differentiable inner metric", std::invalid_argument);
}

TEST_CASE("hard DTW basics and the gamma -> 0 limit") {
    const std::vector<double> x{0.1, 0.5, 0.9};
    CHECK(sdtw::hard_dtw(x, x) == 0.0);

    const std::vector<double> a{0.0};
    const std::vector<double> b{3.0};
    CHECK(sdtw::hard_dtw(a, b) == 9.0);

    Rng rng(303);
    for (int trial = 0; trial < 50; ++trial) {
        const auto u = random_vec(rng, 5);
        const auto v = random_vec(rng, 5);
        const double soft = sdtw::soft_dtw_value(u, v, 1e-3);
        const double hard = sdtw::hard_dtw(u, v);
        CHECK(std::fabs(soft - hard) < 1e-2);
        CHECK(soft <= hard);
    }
}

TEST_CASE("symmetry of the soft distance") {
    Rng rng(404);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_vec(rng, 1 + rng.next_index(8));
        const auto y = random_vec(rng, 1 + rng.next_index(8));
        const double xy = sdtw::soft_dtw_value(x, y, 1.0);
        const double yx = sdtw::soft_dtw_value(y, x, 1.0);
        CHECK(xy == doctest::Approx(yx).epsilon(1e-12));
    }
}

TEST_CASE("soft value never exceeds the hard path cost") {
    Rng rng(505);
    for (int trial = 0; trial < 30; ++trial) {
        const auto x = random_vec(rng, 2 + rng.next_index(7));
        const auto y = random_vec(rng, 2 + rng.next_index(7));
        const double hard = sdtw::hard_dtw(x, y);
        for (double gamma : {0.01, 0.5, 1.0, 5.0}) {
            CHECK(sdtw::soft_dtw_value(x, y, gamma) <= hard + 1e-12);
        }
    }
}

TEST_CASE("soft value is non-increasing in gamma") {
    Rng rng(606);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_vec(rng, 6);
        const auto y = random_vec(rng, 6);
        double prev = sdtw::soft_dtw_value(x, y, 1e-3);
        for (double gamma : {0.01, 0.1, 0.5, 1.0, 2.0, 10.0}) {
            const double v = sdtw::soft_dtw_value(x, y, gamma);
            CHECK(v <= prev + 1e-12);
            prev = v;
        }
    }
}

TEST_CASE("runtime grows linearly with the cell count") {
    Rng rng(707);
    const auto time_instance = [&](std::size_t len) {
        const auto x = random_vec(rng, len);
        const auto y = random_vec(rng, len);
        // warm up once, then take the best of several runs to tame noise
        volatile double sink = sdtw::soft_dtw_value(x, y, 1.0);
        double best = 1e300;
        for (int rep = 0; rep < 5; ++rep) {
            const auto start = std::chrono::steady_clock::now();
            sink = sdtw::soft_dtw_value(x, y, 1.0);
            const auto stop = std::chrono::steady_clock::now();
            best = std::min(best, std::chrono::duration<double>(stop - start).count());
        }
        (void)sink;
        return best;
    };
    const double t1 = time_instance(256);
    const double t2 = time_instance(512);
    const double ratio = t2 / t1;  // cells grow 4x
    CHECK(ratio > 4.0 / 2.0);
    CHECK(ratio < 4.0 * 2.0);
}
