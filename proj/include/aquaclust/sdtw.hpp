// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "aquaclust/matrix.hpp"

namespace aquaclust::sdtw {

enum class InnerMetric { squared_euclidean, absolute };

// Pairwise point costs between two series.
struct CostMatrix {
    Matrix values;
    InnerMetric metric = InnerMetric::squared_euclidean;
};

// A monotone warping path through an M x N cost matrix, from (0,0) to
// (M-1,N-1). Diagonal advances both indices, down advances the row, right
// advances the column.
enum class Step : unsigned char { right, diagonal, down };

struct AlignmentPath {
    std::vector<Step> steps;
};

// Soft distance plus the full forward recursion table ((M+1) x (N+1); the
// value is the bottom-right cell).
struct SdtwResult {
    double value = 0.0;
    Matrix accumulator;
};

CostMatrix pairwise_cost_matrix(std::span<const double> x, std::span<const double> y,
                                InnerMetric metric = InnerMetric::squared_euclidean);

// Soft dynamic time warping: -gamma * log sum over all alignments of
// exp(-cost/gamma), computed by the O(M*N) soft-min recursion.
SdtwResult soft_dtw(std::span<const double> x, std::span<const double> y, double gamma,
                    InnerMetric metric = InnerMetric::squared_euclidean);

double soft_dtw_value(std::span<const double> x, std::span<const double> y, double gamma);

// Gradient of the soft distance with respect to x, via the backward pass over
// the forward accumulator. Requires the differentiable inner metric.
std::vector<double> soft_dtw_gradient(std::span<const double> x, std::span<const double> y,
                                      double gamma,
                                      InnerMetric metric = InnerMetric::squared_euclidean);

// Value and gradient in one sweep (one forward + one backward pass).
double soft_dtw_value_gradient(std::span<const double> x, std::span<const double> y, double gamma,
                               std::span<double> grad_out);

// Classical DTW optimal path cost (the gamma -> 0 limit of soft_dtw).
double hard_dtw(std::span<const double> x, std::span<const double> y,
                InnerMetric metric = InnerMetric::squared_euclidean);

// All monotone paths through an m x n grid. Restricted to m, n <= 6.
std::vector<AlignmentPath> enumerate_alignment_paths(std::size_t m, std::size_t n);

double path_cost(const AlignmentPath& path, const CostMatrix& cost);

// Enumeration oracle for soft_dtw: log-sum-exp over every alignment path,
// max-shifted for stability. Restricted to m, n <= 6.
double brute_force_soft_dtw(std::span<const double> x, std::span<const double> y, double gamma,
                            InnerMetric metric = InnerMetric::squared_euclidean);

}  // namespace aquaclust::sdtw
