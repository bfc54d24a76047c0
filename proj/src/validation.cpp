// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include "aquaclust/validation.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "aquaclust/kernels.hpp"
#include "aquaclust/parallel.hpp"
#include "aquaclust/sdtw.hpp"

namespace aquaclust::validation {

namespace {

int cluster_count(const std::vector<int>& assignments) {
    int k = 0;
    for (int a : assignments) {
        if (a < 0) throw std::invalid_argument("negative cluster index");
        k = std::max(k, a + 1);
    }
    return k;
}

}  // namespace

std::vector<std::string> match_labels(const std::vector<int>& assignments,
                                      const std::vector<std::string>& truth) {
    if (assignments.empty()) throw std::invalid_argument("empty input");
    if (assignments.size() != truth.size()) {
        throw std::invalid_argument("assignments and labels differ in length");
    }
    const int k = cluster_count(assignments);

    std::vector<std::string> labels(truth.begin(), truth.end());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    const int n_labels = static_cast<int>(labels.size());

    // contingency table cluster x label
    std::vector<std::vector<long long>> table(static_cast<std::size_t>(k),
                                              std::vector<long long>(labels.size(), 0));
    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const auto l = static_cast<std::size_t>(
            std::lower_bound(labels.begin(), labels.end(), truth[i]) - labels.begin());
        ++table[static_cast<std::size_t>(assignments[i])][l];
    }

    std::vector<int> best_map(static_cast<std::size_t>(k));
    if (k <= n_labels) {
        // exhaustive assignment solve; k and the label count are tiny
        std::vector<int> perm(static_cast<std::size_t>(n_labels));
        std::iota(perm.begin(), perm.end(), 0);
        long long best_agreement = -1;
        std::vector<int> candidate(static_cast<std::size_t>(k));
        do {
            long long agreement = 0;
            for (int c = 0; c < k; ++c) {
                agreement += table[static_cast<std::size_t>(c)]
                                  [static_cast<std::size_t>(perm[static_cast<std::size_t>(c)])];
            }
            std::copy(perm.begin(), perm.begin() + k, candidate.begin());
            if (agreement > best_agreement ||
                (agreement == best_agreement && candidate < best_map)) {
                best_agreement = agreement;
                best_map = candidate;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));
    } else {
        // more clusters than labels: per-cluster majority
        for (int c = 0; c < k; ++c) {
            int best_label = 0;
            long long best_count = -1;
            for (int l = 0; l < n_labels; ++l) {
                const long long count = table[static_cast<std::size_t>(c)][static_cast<std::size_t>(l)];
                if (count > best_count) {
                    best_count = count;
                    best_label = l;
                }
            }
            best_map[static_cast<std::size_t>(c)] = best_label;
        }
    }

    std::vector<std::string> mapping(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        mapping[static_cast<std::size_t>(c)] =
            labels[static_cast<std::size_t>(best_map[static_cast<std::size_t>(c)])];
    }
    return mapping;
}

ScoreReport success_rate(const std::vector<int>& assignments,
                         const std::vector<std::string>& truth) {
    ScoreReport report;
    report.mapping = match_labels(assignments, truth);
    const std::string& positive = report.mapping.front();

    for (std::size_t i = 0; i < assignments.size(); ++i) {
        const std::string& predicted = report.mapping[static_cast<std::size_t>(assignments[i])];
        const bool correct = predicted == truth[i];
        if (correct) {
            if (truth[i] == positive) {
                ++report.counts.tp;
            } else {
                ++report.counts.tn;
            }
        } else {
            if (predicted == positive) {
                ++report.counts.fp;
            } else {
                ++report.counts.fn;
            }
        }
    }
    report.success_rate = static_cast<double>(report.counts.tp + report.counts.tn) /
                          static_cast<double>(report.counts.total());
    report.error_rate = 1.0 - report.success_rate;
    return report;
}

Matrix pairwise_distances(const std::vector<DemandPattern>& patterns,
                          const cluster::ClusterMethod& method) {
    const auto rows = cluster::prepare_rows(patterns, method);
    const std::size_t n = rows.size();
    Matrix dist(n, n, 0.0);

    if (method.kind != cluster::MethodKind::sdtw) {
        parallel_for(n, [&](std::size_t i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double d = kernels::sq_l2(rows[i].data(), rows[j].data(), rows[i].size());
                dist.at(i, j) = d;
            }
        });
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) dist.at(j, i) = dist.at(i, j);
        }
        return dist;
    }

    // soft-DTW: symmetrize both evaluation orders, then subtract the self
    // terms so identical series sit at distance zero (raw soft values carry a
    // negative alignment-entropy offset that would break the silhouette
    // bounds). Tiny negative remainders are floored at zero.
    std::vector<double> self(n);
    parallel_for(n, [&](std::size_t i) {
        self[i] = sdtw::soft_dtw_value(rows[i], rows[i], method.gamma);
    });

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }
    std::vector<double> sym(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t p) {
        const auto [i, j] = pairs[p];
        const double fwd = sdtw::soft_dtw_value(rows[i], rows[j], method.gamma);
        const double bwd = sdtw::soft_dtw_value(rows[j], rows[i], method.gamma);
        sym[p] = 0.5 * (fwd + bwd);
    });
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto [i, j] = pairs[p];
        const double d = std::max(0.0, sym[p] - 0.5 * (self[i] + self[j]));
        dist.at(i, j) = d;
        dist.at(j, i) = d;
    }
    return dist;
}

SilhouetteReport silhouette(const Matrix& distances, const std::vector<int>& assignments, int k,
                            const std::vector<std::string>& ids) {
    if (k < 2) throw std::invalid_argument("silhouette undefined for a single cluster");
    const std::size_t n = assignments.size();
    if (distances.rows != n || distances.cols != n) {
        throw std::invalid_argument("distance matrix does not match the dataset");
    }
    if (ids.size() != n) throw std::invalid_argument("ids do not match the dataset");

    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (int a : assignments) {
        if (a < 0 || a >= k) throw std::invalid_argument("cluster index out of range");
        ++sizes[static_cast<std::size_t>(a)];
    }
    for (std::size_t c = 0; c < sizes.size(); ++c) {
        if (sizes[c] == 0) throw std::invalid_argument("silhouette requires non-empty clusters");
    }

    SilhouetteReport report;
    report.k = k;
    report.per_member.resize(n);

    for (std::size_t l = 0; l < n; ++l) {
        const auto own = static_cast<std::size_t>(assignments[l]);
        double value = 0.0;
        if (sizes[own] > 1) {
            std::vector<double> mean_to(static_cast<std::size_t>(k), 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                if (j == l) continue;
                mean_to[static_cast<std::size_t>(assignments[j])] += distances.at(l, j);
            }
            const double a =
                mean_to[own] / static_cast<double>(sizes[own] - 1);
            double b = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
                if (c == own) continue;
                b = std::min(b, mean_to[c] / static_cast<double>(sizes[c]));
            }
            const double denom = std::max(a, b);
            value = denom > 0.0 ? (b - a) / denom : 0.0;
        }
        report.per_member[l] = SilhouetteEntry{ids[l], assignments[l], value};
    }

    double total = 0.0;
    for (const auto& e : report.per_member) total += e.value;
    report.mean = total / static_cast<double>(n);
    return report;
}

SilhouetteReport silhouette(const std::vector<DemandPattern>& patterns,
                            const cluster::Clustering& clustering) {
    std::vector<std::string> ids;
    ids.reserve(patterns.size());
    for (const auto& p : patterns) ids.push_back(p.id);
    const Matrix dist = pairwise_distances(patterns, clustering.method);
    return silhouette(dist, clustering.assignments, clustering.k, ids);
}

ClusterAnalysis cluster_analysis(const std::vector<DemandPattern>& patterns, int k_min, int k_max,
                                 const cluster::ClusterMethod& method,
                                 const cluster::Options& opts) {
    const auto n = static_cast<int>(patterns.size());
    if (k_min < 2 || k_min > k_max || k_max > n - 1) {
        throw std::invalid_argument("invalid k range");
    }

    std::vector<std::string> ids;
    ids.reserve(patterns.size());
    for (const auto& p : patterns) ids.push_back(p.id);
    const Matrix dist = pairwise_distances(patterns, method);

    ClusterAnalysis analysis;
    for (int k = k_min; k <= k_max; ++k) {
        const cluster::Clustering clustering = cluster::kmeans(patterns, k, method, opts);
        const SilhouetteReport report = silhouette(dist, clustering.assignments, k, ids);
        analysis.rows.push_back(ClusterAnalysisRow{k, report.mean, clustering.objective});
    }

    analysis.best_k = analysis.rows.front().k;
    double best = analysis.rows.front().mean_silhouette;
    for (const auto& row : analysis.rows) {
        if (row.mean_silhouette > best) {
            best = row.mean_silhouette;
            analysis.best_k = row.k;
        }
    }
    return analysis;
}

std::vector<SilhouetteEntry> flag_outliers(const SilhouetteReport& report) {
    std::vector<SilhouetteEntry> out;
    for (const auto& e : report.per_member) {
        if (e.value < 0.0) out.push_back(e);
    }
    std::sort(out.begin(), out.end(), [](const SilhouetteEntry& a, const SilhouetteEntry& b) {
        if (a.value != b.value) return a.value < b.value;
        return a.id < b.id;
    });
    return out;
}

}  // namespace aquaclust::validation
