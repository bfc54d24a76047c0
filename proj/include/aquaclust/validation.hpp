// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "aquaclust/kmeans.hpp"
#include "aquaclust/matrix.hpp"
#include "aquaclust/time_series.hpp"

namespace aquaclust::validation {

struct ConfusionCounts {
    long long tp = 0;
    long long tn = 0;
    long long fp = 0;
    long long fn = 0;

    long long total() const { return tp + tn + fp + fn; }
};

struct ScoreReport {
    ConfusionCounts counts;
    double success_rate = 0.0;
    double error_rate = 0.0;
    std::vector<std::string> mapping;  // mapping[cluster] = truth label
};

// Optimal cluster -> label mapping maximizing agreement. One-to-one while
// k does not exceed the number of distinct labels (exhaustive assignment
// solve; k is small here); otherwise per-cluster majority. Ties prefer the
// mapping that gives lower-indexed clusters the lexicographically smaller
// label.
std::vector<std::string> match_labels(const std::vector<int>& assignments,
                                      const std::vector<std::string>& truth);

// Accuracy under the matched mapping, reported as SR = (TP+TN)/total and
// ER = 1 - SR. The first cluster's matched label acts as the positive class
// for the confusion split; for k = 2 this is the symmetric two-cluster
// convention.
ScoreReport success_rate(const std::vector<int>& assignments,
                         const std::vector<std::string>& truth);

struct SilhouetteEntry {
    std::string id;
    int cluster = 0;
    double value = 0.0;
};

struct SilhouetteReport {
    std::vector<SilhouetteEntry> per_member;
    double mean = 0.0;
    int k = 0;
};

// Pairwise dissimilarity matrix under the clustering method's own measure.
// For sdtw the raw soft values are symmetrized ((d(x,y)+d(y,x))/2) and
// recentred by the self terms (d(x,y) - (d(x,x)+d(y,y))/2, floored at zero)
// so that self-dissimilarity is zero and silhouettes stay inside [-1, 1].
Matrix pairwise_distances(const std::vector<DemandPattern>& patterns,
                          const cluster::ClusterMethod& method);

// Silhouette per member over a precomputed distance matrix. Singleton
// clusters score zero by convention, as does a(y)=b(y)=0.
SilhouetteReport silhouette(const Matrix& distances, const std::vector<int>& assignments, int k,
                            const std::vector<std::string>& ids);

SilhouetteReport silhouette(const std::vector<DemandPattern>& patterns,
                            const cluster::Clustering& clustering);

struct ClusterAnalysisRow {
    int k = 0;
    double mean_silhouette = 0.0;
    double objective = 0.0;
};

struct ClusterAnalysis {
    std::vector<ClusterAnalysisRow> rows;
    int best_k = 0;  // argmax mean silhouette, smallest k on ties
};

// Runs kmeans for every k in [k_min, k_max] and scores each partition with
// the mean silhouette. The pairwise distance matrix is computed once and
// shared across all k.
ClusterAnalysis cluster_analysis(const std::vector<DemandPattern>& patterns, int k_min, int k_max,
                                 const cluster::ClusterMethod& method,
                                 const cluster::Options& opts = {});

// Members with strictly negative silhouette, sorted ascending by value.
std::vector<SilhouetteEntry> flag_outliers(const SilhouetteReport& report);

}  // namespace aquaclust::validation
