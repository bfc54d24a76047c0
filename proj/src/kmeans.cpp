// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include "aquaclust/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "aquaclust/barycenter.hpp"
#include "aquaclust/kernels.hpp"
#include "aquaclust/parallel.hpp"
#include "aquaclust/sdtw.hpp"

namespace aquaclust::cluster {

const char* method_name(MethodKind kind) {
    switch (kind) {
        case MethodKind::sdtw: return "sdtw";
        case MethodKind::euclidean: return "euclidean";
        case MethodKind::simple: return "simple";
    }
    return "sdtw";
}

MethodKind method_from_name(const std::string& name) {
    if (name == "sdtw") return MethodKind::sdtw;
    if (name == "euclidean") return MethodKind::euclidean;
    if (name == "simple") return MethodKind::simple;
    throw std::invalid_argument("unknown method: " + name);
}

std::vector<std::vector<double>> prepare_rows(const std::vector<DemandPattern>& patterns,
                                              const ClusterMethod& method) {
    if (patterns.empty()) throw std::invalid_argument("no patterns to cluster");
    const std::size_t period = patterns.front().period();
    for (const auto& p : patterns) {
        if (p.period() != period) throw std::invalid_argument("inconsistent pattern lengths");
    }

    std::vector<std::vector<double>> rows;
    rows.reserve(patterns.size());
    for (const auto& p : patterns) {
        if (method.normalize_input && !p.normalized) {
            rows.push_back(min_max_normalize(std::span<const double>(p.values)));
        } else {
            rows.push_back(p.values);
        }
    }

    if (method.kind == MethodKind::simple) {
        const IndexRange window = work_hours_range(period);
        std::vector<std::vector<double>> features;
        features.reserve(rows.size());
        for (auto& r : rows) {
            DemandPattern tmp;
            tmp.values = std::move(r);
            const FeatureVector f = work_hour_features(tmp, window);
            features.push_back({f.mean_workhours, f.std_workhours});
        }
        return features;
    }
    return rows;
}

double method_distance(const ClusterMethod& method, std::span<const double> row,
                       std::span<const double> center) {
    if (method.kind == MethodKind::sdtw) {
        return sdtw::soft_dtw_value(center, row, method.gamma);
    }
    return kernels::sq_l2(row.data(), center.data(), row.size());
}

std::vector<std::size_t> kmeanspp_seed(const std::vector<std::vector<double>>& rows, int k,
                                       const DistanceFn& distance, Rng& rng) {
    const std::size_t n = rows.size();
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (static_cast<std::size_t>(k) > n) throw std::invalid_argument("k exceeds dataset size");

    std::vector<std::size_t> centers;
    centers.reserve(static_cast<std::size_t>(k));
    std::vector<bool> chosen(n, false);

    const std::size_t first = rng.next_index(n);
    centers.push_back(first);
    chosen[first] = true;

    std::vector<double> nearest(n);
    for (std::size_t i = 0; i < n; ++i) nearest[i] = distance(rows[i], rows[first]);

    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = std::max(nearest[i], 0.0);
            total += d * d;
        }
        std::size_t pick = n;
        if (total > 0.0) {
            const double target = rng.next_double() * total;
            double running = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = std::max(nearest[i], 0.0);
                running += d * d;
                if (running >= target && d > 0.0) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {  // numeric spill: last positive-weight index
                for (std::size_t i = n; i-- > 0;) {
                    if (std::max(nearest[i], 0.0) > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        }
        if (pick == n) {
            // all remaining points coincide with chosen centers: uniform draw
            std::vector<std::size_t> remaining;
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) remaining.push_back(i);
            }
            pick = remaining[rng.next_index(remaining.size())];
        }
        centers.push_back(pick);
        chosen[pick] = true;
        for (std::size_t i = 0; i < n; ++i) {
            nearest[i] = std::min(nearest[i], distance(rows[i], rows[pick]));
        }
    }
    return centers;
}

std::vector<std::vector<double>> cluster_means(const std::vector<std::vector<double>>& rows,
                                               const std::vector<int>& assignments, int k) {
    const std::size_t dim = rows.front().size();
    std::vector<std::vector<double>> means(static_cast<std::size_t>(k),
                                           std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignments[i]);
        for (std::size_t j = 0; j < dim; ++j) means[c][j] += rows[i][j];
        ++counts[c];
    }
    for (std::size_t c = 0; c < means.size(); ++c) {
        if (counts[c] == 0) continue;
        const double inv = 1.0 / static_cast<double>(counts[c]);
        for (double& v : means[c]) v *= inv;
    }
    return means;
}

namespace {

struct RestartOutcome {
    std::vector<int> assignments;
    std::vector<std::vector<double>> centers;
    double objective = std::numeric_limits<double>::infinity();
    int n_iter = 0;
    std::vector<double> trace;
};

// distances of every row to every center under the method, rows in parallel
void fill_distances(const ClusterMethod& method, const std::vector<std::vector<double>>& rows,
                    const std::vector<std::vector<double>>& centers, Matrix& dist) {
    const std::size_t k = centers.size();
    parallel_for(rows.size(), [&](std::size_t i) {
        double* out = dist.row(i);
        for (std::size_t c = 0; c < k; ++c) {
            out[c] = method_distance(method, rows[i], centers[c]);
        }
    });
}

RestartOutcome run_restart(const std::vector<std::vector<double>>& rows, int k,
                           const ClusterMethod& method, const Options& opts,
                           std::uint64_t restart_seed) {
    const std::size_t n = rows.size();
    Rng rng(restart_seed);

    // k-means++ in the row space; squaring the Euclidean norm inside the
    // seeding recovers the classical squared-distance weighting for every
    // method
    const DistanceFn seed_distance = [](std::span<const double> a, std::span<const double> b) {
        return std::sqrt(kernels::sq_l2(a.data(), b.data(), a.size()));
    };
    const auto seed_idx = kmeanspp_seed(rows, k, seed_distance, rng);

    RestartOutcome out;
    out.centers.reserve(static_cast<std::size_t>(k));
    for (std::size_t idx : seed_idx) out.centers.push_back(rows[idx]);
    out.assignments.assign(n, -1);

    Matrix dist(n, static_cast<std::size_t>(k));
    std::vector<int> prev(n, -1);

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        fill_distances(method, rows, out.centers, dist);

        for (std::size_t i = 0; i < n; ++i) {
            const double* row = dist.row(i);
            int best = 0;
            for (int c = 1; c < k; ++c) {
                if (row[c] < row[best]) best = c;  // ties keep the lowest index
            }
            out.assignments[i] = best;
        }

        // empty-cluster repair: the farthest pattern from its own center
        // becomes the lost cluster's singleton
        std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
        for (int a : out.assignments) ++sizes[static_cast<std::size_t>(a)];
        for (int c = 0; c < k; ++c) {
            if (sizes[static_cast<std::size_t>(c)] > 0) continue;
            std::size_t worst = n;
            double worst_dist = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < n; ++i) {
                const auto own = static_cast<std::size_t>(out.assignments[i]);
                if (sizes[own] < 2) continue;
                const double d = dist.at(i, own);
                if (d > worst_dist) {
                    worst_dist = d;
                    worst = i;
                }
            }
            if (worst == n) break;  // nothing movable
            --sizes[static_cast<std::size_t>(out.assignments[worst])];
            out.assignments[worst] = c;
            ++sizes[static_cast<std::size_t>(c)];
        }

        double objective = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            objective += dist.at(i, static_cast<std::size_t>(out.assignments[i]));
        }
        out.trace.push_back(objective);
        out.n_iter = iter + 1;

        if (out.assignments == prev) break;
        prev = out.assignments;

        // update step
        if (method.kind == MethodKind::sdtw) {
            for (int c = 0; c < k; ++c) {
                std::vector<std::vector<double>> members;
                for (std::size_t i = 0; i < n; ++i) {
                    if (out.assignments[i] == c) members.push_back(rows[i]);
                }
                barycenter::Options bopts;
                bopts.max_iter = opts.barycenter_max_iter;
                bopts.grad_tol = opts.barycenter_grad_tol;
                auto result = barycenter::compute(members, out.centers[static_cast<std::size_t>(c)],
                                                  method.gamma, bopts);
                out.centers[static_cast<std::size_t>(c)] = std::move(result.center);
            }
        } else {
            out.centers = cluster_means(rows, out.assignments, k);
        }
    }

    out.objective = out.trace.back();
    return out;
}

}  // namespace

Clustering kmeans(const std::vector<DemandPattern>& patterns, int k, const ClusterMethod& method,
                  const Options& opts) {
    const auto rows = prepare_rows(patterns, method);
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (static_cast<std::size_t>(k) > rows.size()) {
        throw std::invalid_argument("k exceeds dataset size");
    }
    if (opts.n_restarts < 1) throw std::invalid_argument("need at least one restart");
    if (method.kind == MethodKind::sdtw && !(method.gamma > 0.0)) {
        throw std::invalid_argument("gamma must be positive");
    }

    SplitMix64 seeds(opts.seed);
    RestartOutcome best;
    bool have_best = false;
    for (int r = 0; r < opts.n_restarts; ++r) {
        const std::uint64_t restart_seed = seeds.next();
        RestartOutcome out = run_restart(rows, k, method, opts, restart_seed);
        if (!have_best || out.objective < best.objective) {
            best = std::move(out);
            have_best = true;
        }
    }

    Clustering clustering;
    clustering.k = k;
    clustering.method = method;
    clustering.seed = opts.seed;
    clustering.assignments = std::move(best.assignments);
    clustering.centers = std::move(best.centers);
    clustering.objective = best.objective;
    clustering.n_iter = best.n_iter;
    clustering.objective_trace = std::move(best.trace);
    return clustering;
}

Matrix assignment_distances(const std::vector<DemandPattern>& patterns,
                            const Clustering& clustering) {
    const auto rows = prepare_rows(patterns, clustering.method);
    if (clustering.centers.empty() ||
        clustering.centers.front().size() != rows.front().size()) {
        throw std::invalid_argument("clustering shape does not match the dataset");
    }
    Matrix dist(rows.size(), clustering.centers.size());
    fill_distances(clustering.method, rows, clustering.centers, dist);
    return dist;
}

}  // namespace aquaclust::cluster
