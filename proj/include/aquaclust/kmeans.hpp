// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "aquaclust/matrix.hpp"
#include "aquaclust/rng.hpp"
#include "aquaclust/time_series.hpp"

namespace aquaclust::cluster {

enum class MethodKind { sdtw, euclidean, simple };

const char* method_name(MethodKind kind);
MethodKind method_from_name(const std::string& name);

struct ClusterMethod {
    MethodKind kind = MethodKind::sdtw;
    double gamma = 1.0;           // sdtw only
    bool normalize_input = true;  // min-max normalize patterns before clustering

    static ClusterMethod sdtw(double gamma = 1.0) { return {MethodKind::sdtw, gamma, true}; }
    static ClusterMethod euclidean() { return {MethodKind::euclidean, 0.0, true}; }
    // Work-hour features depend on magnitude, so simple does not normalize by
    // default.
    static ClusterMethod simple() { return {MethodKind::simple, 0.0, false}; }
};

struct Options {
    int max_iter = 50;
    int n_restarts = 8;
    std::uint64_t seed = 0;
    int barycenter_max_iter = 30;
    double barycenter_grad_tol = 1e-5;
};

struct Clustering {
    int k = 0;
    ClusterMethod method;
    std::uint64_t seed = 0;
    std::vector<int> assignments;              // one cluster index per pattern
    std::vector<std::vector<double>> centers;  // series, or (mean, std) for simple
    double objective = 0.0;
    int n_iter = 0;
    std::vector<double> objective_trace;  // assignment-step objective per iteration
};

// Rows actually clustered: normalized patterns or 2-d feature vectors,
// depending on the method.
std::vector<std::vector<double>> prepare_rows(const std::vector<DemandPattern>& patterns,
                                              const ClusterMethod& method);

// Distance between a row and a center under the method: soft-DTW value,
// squared Euclidean, or squared Euclidean in feature space.
double method_distance(const ClusterMethod& method, std::span<const double> row,
                       std::span<const double> center);

using DistanceFn = std::function<double(std::span<const double>, std::span<const double>)>;

// k-means++ seeding: the first center uniform, each further center sampled
// with probability proportional to the squared distance to its nearest chosen
// center (distances clamped at zero before squaring). Returns dataset
// indices. Deterministic given the rng state.
std::vector<std::size_t> kmeanspp_seed(const std::vector<std::vector<double>>& rows, int k,
                                       const DistanceFn& distance, Rng& rng);

// Lloyd iterations with k-means++ seeding, deterministic restarts, and
// empty-cluster repair; best objective across restarts wins.
Clustering kmeans(const std::vector<DemandPattern>& patterns, int k, const ClusterMethod& method,
                  const Options& opts = {});

// |patterns| x k matrix of distances to every center under the clustering's
// own method.
Matrix assignment_distances(const std::vector<DemandPattern>& patterns,
                            const Clustering& clustering);

// Pointwise within-cluster means (the Euclidean centers mu_j of an existing
// partition; reported next to barycenters for sdtw clusterings).
std::vector<std::vector<double>> cluster_means(const std::vector<std::vector<double>>& rows,
                                               const std::vector<int>& assignments, int k);

}  // namespace aquaclust::cluster
