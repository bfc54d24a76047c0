// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <utility>
#include <vector>

namespace aquaclust::barycenter {

struct Options {
    int max_iter = 100;
    double grad_tol = 1e-5;  // infinity norm of the gradient
};

enum class Init { euclidean_mean, medoid };

struct Result {
    std::vector<double> center;
    double objective = 0.0;
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
};

// Sum of soft distances from x to every family member, with its gradient.
// Family members are evaluated independently (possibly in parallel) and both
// reductions are order-insensitive, so the result does not depend on the
// ordering of the family.
std::pair<double, std::vector<double>> objective(std::span<const double> x,
                                                 const std::vector<std::vector<double>>& family,
                                                 double gamma);

double objective_value(std::span<const double> x, const std::vector<std::vector<double>>& family,
                       double gamma);

// Minimizes the summed soft distance with BFGS and an Armijo backtracking
// line search, starting from the given center. Only strictly decreasing steps
// are accepted, so the final objective never exceeds the initial one.
Result compute(const std::vector<std::vector<double>>& family, std::vector<double> init,
               double gamma, const Options& opts = {});

Result compute(const std::vector<std::vector<double>>& family, Init init, double gamma,
               const Options& opts = {});

// Pointwise mean of the family (the default starting point).
std::vector<double> euclidean_mean(const std::vector<std::vector<double>>& family);

// Family member with the least summed soft distance to the others.
std::size_t medoid_index(const std::vector<std::vector<double>>& family, double gamma);

}  // namespace aquaclust::barycenter
