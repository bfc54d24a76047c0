// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include "aquaclust/sdtw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "aquaclust/kernels.hpp"

namespace aquaclust::sdtw {

namespace {

void check_series(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw std::invalid_argument("series must be non-empty");
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument("series contains non-finite values");
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw std::invalid_argument("series contains non-finite values");
    }
}

void check_gamma(double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("gamma must be positive");
    }
}

constexpr std::size_t kOracleLimit = 6;

}  // namespace

CostMatrix pairwise_cost_matrix(std::span<const double> x, std::span<const double> y,
                                InnerMetric metric) {
    check_series(x, y);
    CostMatrix cost;
    cost.metric = metric;
    cost.values = Matrix(x.size(), y.size());
    if (metric == InnerMetric::squared_euclidean) {
        kernels::cost_sq_euclid(x.data(), x.size(), y.data(), y.size(), cost.values.data.data());
    } else {
        kernels::cost_absolute(x.data(), x.size(), y.data(), y.size(), cost.values.data.data());
    }
    return cost;
}

SdtwResult soft_dtw(std::span<const double> x, std::span<const double> y, double gamma,
                    InnerMetric metric) {
    check_gamma(gamma);
    const CostMatrix cost = pairwise_cost_matrix(x, y, metric);
    const std::size_t m = x.size();
    const std::size_t n = y.size();

    SdtwResult result;
    result.accumulator = Matrix(m + 1, n + 1);
    kernels::sdtw_forward(cost.values.data.data(), m, n, gamma, result.accumulator.data.data());
    result.value = result.accumulator.at(m, n);
    return result;
}

double soft_dtw_value(std::span<const double> x, std::span<const double> y, double gamma) {
    return soft_dtw(x, y, gamma).value;
}

double soft_dtw_value_gradient(std::span<const double> x, std::span<const double> y, double gamma,
                               std::span<double> grad_out) {
    check_gamma(gamma);
    check_series(x, y);
    const std::size_t m = x.size();
    const std::size_t n = y.size();
    if (grad_out.size() != m) throw std::invalid_argument("gradient output size mismatch");

    Matrix cost(m, n);
    kernels::cost_sq_euclid(x.data(), m, y.data(), n, cost.data.data());
    Matrix acc(m + 1, n + 1);
    kernels::sdtw_forward(cost.data.data(), m, n, gamma, acc.data.data());
    Matrix expect(m, n);
    kernels::sdtw_backward(cost.data.data(), acc.data.data(), m, n, gamma, expect.data.data());

    // chain rule through the squared Euclidean point cost
    for (std::size_t i = 0; i < m; ++i) {
        double g = 0.0;
        const double* e_row = expect.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            g += e_row[j] * 2.0 * (x[i] - y[j]);
        }
        grad_out[i] = g;
    }
    return acc.at(m, n);
}

std::vector<double> soft_dtw_gradient(std::span<const double> x, std::span<const double> y,
                                      double gamma, InnerMetric metric) {
    if (metric != InnerMetric::squared_euclidean) {
        throw std::invalid_argument("gradient requires differentiable inner metric");
    }
    std::vector<double> grad(x.size());
    soft_dtw_value_gradient(x, y, gamma, grad);
    return grad;
}

double hard_dtw(std::span<const double> x, std::span<const double> y, InnerMetric metric) {
    const CostMatrix cost = pairwise_cost_matrix(x, y, metric);
    const std::size_t m = x.size();
    const std::size_t n = y.size();
    const std::size_t w = n + 1;

    std::vector<double> acc((m + 1) * w, kernels::kAccBorder);
    acc[0] = 0.0;
    for (std::size_t i = 1; i <= m; ++i) {
        const double* cost_row = cost.values.row(i - 1);
        double* row = acc.data() + i * w;
        const double* above = acc.data() + (i - 1) * w;
        for (std::size_t j = 1; j <= n; ++j) {
            row[j] = cost_row[j - 1] + std::min(above[j - 1], std::min(above[j], row[j - 1]));
        }
    }
    return acc[m * w + n];
}

namespace {

void extend_paths(std::size_t i, std::size_t j, std::size_t m, std::size_t n,
                  std::vector<Step>& steps, std::vector<AlignmentPath>& out) {
    if (i == m - 1 && j == n - 1) {
        out.push_back(AlignmentPath{steps});
        return;
    }
    if (j + 1 < n) {
        steps.push_back(Step::right);
        extend_paths(i, j + 1, m, n, steps, out);
        steps.pop_back();
    }
    if (i + 1 < m && j + 1 < n) {
        steps.push_back(Step::diagonal);
        extend_paths(i + 1, j + 1, m, n, steps, out);
        steps.pop_back();
    }
    if (i + 1 < m) {
        steps.push_back(Step::down);
        extend_paths(i + 1, j, m, n, steps, out);
        steps.pop_back();
    }
}

}  // namespace

std::vector<AlignmentPath> enumerate_alignment_paths(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) throw std::invalid_argument("series must be non-empty");
    if (m > kOracleLimit || n > kOracleLimit) {
        throw std::invalid_argument("oracle restricted to tiny instances");
    }
    std::vector<AlignmentPath> out;
    std::vector<Step> steps;
    extend_paths(0, 0, m, n, steps, out);
    return out;
}

double path_cost(const AlignmentPath& path, const CostMatrix& cost) {
    std::size_t i = 0;
    std::size_t j = 0;
    double total = cost.values.at(0, 0);
    for (Step s : path.steps) {
        if (s == Step::right) {
            ++j;
        } else if (s == Step::down) {
            ++i;
        } else {
            ++i;
            ++j;
        }
        total += cost.values.at(i, j);
    }
    return total;
}

double brute_force_soft_dtw(std::span<const double> x, std::span<const double> y, double gamma,
                            InnerMetric metric) {
    check_gamma(gamma);
    const CostMatrix cost = pairwise_cost_matrix(x, y, metric);
    const auto paths = enumerate_alignment_paths(x.size(), y.size());

    std::vector<double> costs;
    costs.reserve(paths.size());
    for (const auto& p : paths) costs.push_back(path_cost(p, cost));

    // -gamma * log sum exp(-c/gamma), shifted by the smallest path cost
    const double mn = *std::min_element(costs.begin(), costs.end());
    double total = 0.0;
    for (double c : costs) total += std::exp((mn - c) / gamma);
    return mn - gamma * std::log(total);
}

}  // namespace aquaclust::sdtw
