// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include <doctest.h>

#include "aquaclust/kmeans.hpp"
#include "aquaclust/rng.hpp"
#include "aquaclust/sdtw.hpp"

using namespace aquaclust;
using cluster::ClusterMethod;
using cluster::MethodKind;

namespace {

DemandPattern make_pattern(std::vector<double> values, std::string id) {
    DemandPattern p;
    p.values = std::move(values);
    p.id = std::move(id);
    return p;
}

// canonical partition signature, independent of cluster labels
std::multiset<std::multiset<std::size_t>> partition_of(const std::vector<int>& assignments) {
    std::map<int, std::multiset<std::size_t>> groups;
    for (std::size_t i = 0; i < assignments.size(); ++i) groups[assignments[i]].insert(i);
    std::multiset<std::multiset<std::size_t>> partition;
    for (auto& [label, members] : groups) partition.insert(members);
    return partition;
}

std::vector<DemandPattern> two_blob_patterns(std::size_t per_blob, double spread, Rng& rng) {
    std::vector<DemandPattern> patterns;
    for (std::size_t i = 0; i < 2 * per_blob; ++i) {
        const double base = i < per_blob ? 0.0 : 10.0;
        std::vector<double> v(6);
        for (auto& x : v) x = base + rng.uniform(-spread, spread);
        DemandPattern p = make_pattern(std::move(v), "p" + std::to_string(i));
        p.normalized = true;  // keep raw scale: blobs differ by level, not shape
        patterns.push_back(std::move(p));
    }
    return patterns;
}

}  // namespace

TEST_CASE("kmeans++ seeding") {
    Rng base_rng(77);
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 30; ++i) {
        rows.push_back({base_rng.uniform(0.0, 1.0), base_rng.uniform(0.0, 1.0)});
    }
    const cluster::DistanceFn euclid = [](std::span<const double> a, std::span<const double> b) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
        return std::sqrt(acc);
    };

    SUBCASE("k = 1 returns one member") {
        Rng rng(1);
        const auto centers = cluster::kmeanspp_seed(rows, 1, euclid, rng);
        CHECK(centers.size() == 1);
        CHECK(centers[0] < rows.size());
    }

    SUBCASE("duplicated distinct points are all discovered") {
        std::vector<std::vector<double>> dup;
        for (int copy = 0; copy < 10; ++copy) {
            dup.push_back({0.0, 0.0});
            dup.push_back({5.0, 0.0});
            dup.push_back({0.0, 5.0});
        }
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            Rng rng(seed);
            const auto centers = cluster::kmeanspp_seed(dup, 3, euclid, rng);
            std::set<std::vector<double>> distinct;
            for (auto idx : centers) distinct.insert(dup[idx]);
            CHECK(distinct.size() == 3);
        }
    }

    SUBCASE("fixed seed gives an identical sequence") {
        Rng rng_a(42);
        Rng rng_b(42);
        CHECK(cluster::kmeanspp_seed(rows, 5, euclid, rng_a) ==
              cluster::kmeanspp_seed(rows, 5, euclid, rng_b));
    }

    SUBCASE("k larger than the dataset is rejected") {
        Rng rng(1);
        CHECK_THROWS_AS(cluster::kmeanspp_seed(rows, 31, euclid, rng), std::invalid_argument);
    }
}

TEST_CASE("k = 1 euclidean center is the pointwise mean") {
    Rng rng(5);
    std::vector<DemandPattern> patterns;
    for (int i = 0; i < 12; ++i) {
        std::vector<double> v(8);
        for (auto& x : v) x = rng.uniform(0.0, 4.0);
        DemandPattern p = make_pattern(std::move(v), "p" + std::to_string(i));
        p.normalized = true;  // bypass input normalization: test the raw mean
        patterns.push_back(std::move(p));
    }
    const auto clustering = cluster::kmeans(patterns, 1, ClusterMethod::euclidean());
    for (std::size_t j = 0; j < 8; ++j) {
        double mean = 0.0;
        for (const auto& p : patterns) mean += p.values[j];
        mean /= static_cast<double>(patterns.size());
        CHECK(clustering.centers[0][j] == doctest::Approx(mean).epsilon(1e-12));
    }
    CHECK(clustering.objective >= 0.0);
}

TEST_CASE("well-separated blobs are always split perfectly") {
    Rng rng(6);
    const auto patterns = two_blob_patterns(6, 0.05, rng);
    for (std::uint64_t seed : {0ull, 1ull, 2ull, 99ull}) {
        cluster::Options opts;
        opts.seed = seed;
        opts.n_restarts = 1;
        const auto clustering = cluster::kmeans(patterns, 2, ClusterMethod::euclidean(), opts);
        for (std::size_t i = 0; i < patterns.size(); ++i) {
            CHECK(clustering.assignments[i] == clustering.assignments[i < 6 ? 0 : 6]);
        }
        CHECK(clustering.assignments[0] != clustering.assignments[6]);
    }
}

TEST_CASE("euclidean objective is non-increasing across iterations") {
    Rng rng(7);
    std::vector<DemandPattern> patterns;
    for (int i = 0; i < 60; ++i) {
        std::vector<double> v(10);
        for (auto& x : v) x = rng.uniform(0.0, 1.0);
        DemandPattern p = make_pattern(std::move(v), "p" + std::to_string(i));
        p.normalized = true;
        patterns.push_back(std::move(p));
    }
    cluster::Options opts;
    opts.n_restarts = 1;
    const auto clustering = cluster::kmeans(patterns, 3, ClusterMethod::euclidean(), opts);
    for (std::size_t t = 1; t < clustering.objective_trace.size(); ++t) {
        CHECK(clustering.objective_trace[t] <= clustering.objective_trace[t - 1] + 1e-9);
    }
    CHECK(clustering.n_iter >= 1);
}

TEST_CASE("simple method equals euclidean k-means on the feature vectors") {
    Rng rng(8);
    std::vector<DemandPattern> patterns;
    for (int i = 0; i < 40; ++i) {
        std::vector<double> v(48);
        const double level = (i % 2 == 0) ? 1.0 : 6.0;
        for (auto& x : v) x = level + rng.uniform(-0.5, 0.5);
        patterns.push_back(make_pattern(std::move(v), "p" + std::to_string(i)));
    }
    cluster::Options opts;
    opts.seed = 3;

    const auto direct = cluster::kmeans(patterns, 2, ClusterMethod::simple(), opts);

    // same run, but with the features extracted by hand first
    std::vector<DemandPattern> features;
    for (const auto& p : patterns) {
        const FeatureVector f = work_hour_features(p);
        DemandPattern fp = make_pattern({f.mean_workhours, f.std_workhours}, p.id);
        fp.normalized = true;
        features.push_back(std::move(fp));
    }
    ClusterMethod euclid_raw = ClusterMethod::euclidean();
    euclid_raw.normalize_input = false;
    const auto via_features = cluster::kmeans(features, 2, euclid_raw, opts);

    CHECK(direct.assignments == via_features.assignments);
}

TEST_CASE("identical seeds give identical clusterings, different labels same partition") {
    Rng rng(9);
    const auto patterns = two_blob_patterns(8, 1.0, rng);
    cluster::Options opts;
    opts.seed = 1234;
    const auto a = cluster::kmeans(patterns, 3, ClusterMethod::euclidean(), opts);
    const auto b = cluster::kmeans(patterns, 3, ClusterMethod::euclidean(), opts);
    CHECK(a.assignments == b.assignments);
    CHECK(a.centers == b.centers);
    CHECK(a.objective == b.objective);

    // another seed may relabel clusters; compare partitions instead
    opts.seed = 999;
    const auto c = cluster::kmeans(patterns, 2, ClusterMethod::euclidean(), opts);
    opts.seed = 1234;
    const auto d = cluster::kmeans(patterns, 2, ClusterMethod::euclidean(), opts);
    CHECK(partition_of(c.assignments) == partition_of(d.assignments));
}

TEST_CASE("sdtw k-means separates shape classes and keeps the descent property") {
    Rng rng(10);
    std::vector<DemandPattern> patterns;
    // two shape classes: early bump vs late bump, each with small time jitter
    for (int i = 0; i < 16; ++i) {
        std::vector<double> v(24, 0.0);
        const int base = (i < 8) ? 5 : 14;
        const int shift = static_cast<int>(rng.next_index(3)) - 1;
        for (int t = -2; t <= 2; ++t) {
            v[static_cast<std::size_t>(base + shift + t)] = 1.0 - 0.3 * std::abs(t);
        }
        patterns.push_back(make_pattern(std::move(v), "p" + std::to_string(i)));
    }
    cluster::Options opts;
    opts.seed = 7;
    opts.n_restarts = 2;
    const auto clustering = cluster::kmeans(patterns, 2, ClusterMethod::sdtw(1.0), opts);
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        CHECK(clustering.assignments[i] == clustering.assignments[i < 8 ? 0 : 8]);
    }
    CHECK(clustering.assignments[0] != clustering.assignments[8]);

    // every cluster keeps at least one member
    std::set<int> used(clustering.assignments.begin(), clustering.assignments.end());
    CHECK(used.size() == 2);
}

TEST_CASE("assignment_distances matches direct distance calls") {
    Rng rng(11);
    const auto patterns = two_blob_patterns(5, 0.5, rng);
    cluster::Options opts;
    opts.seed = 21;
    opts.n_restarts = 2;

    SUBCASE("euclidean") {
        const auto clustering = cluster::kmeans(patterns, 2, ClusterMethod::euclidean(), opts);
        const auto dist = cluster::assignment_distances(patterns, clustering);
        CHECK(dist.rows == patterns.size());
        CHECK(dist.cols == 2);
        // a pattern placed exactly at a center has distance zero
        std::vector<DemandPattern> with_center = patterns;
        DemandPattern center_pattern = make_pattern(clustering.centers[0], "center");
        center_pattern.normalized = true;
        with_center.push_back(center_pattern);
        const auto dist2 = cluster::assignment_distances(with_center, clustering);
        CHECK(dist2.at(patterns.size(), 0) == 0.0);
    }

    SUBCASE("sdtw distances equal soft_dtw of the prepared rows") {
        ClusterMethod method = ClusterMethod::sdtw(1.0);
        const auto clustering = cluster::kmeans(patterns, 2, method, opts);
        const auto rows = cluster::prepare_rows(patterns, method);
        const auto dist = cluster::assignment_distances(patterns, clustering);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t c = 0; c < 2; ++c) {
                const double direct =
                    sdtw::soft_dtw_value(clustering.centers[c], rows[i], 1.0);
                CHECK(std::fabs(dist.at(i, c) - direct) <= 1e-12);
            }
        }
    }

    SUBCASE("k = 1 yields a single column") {
        const auto clustering = cluster::kmeans(patterns, 1, ClusterMethod::euclidean(), opts);
        const auto dist = cluster::assignment_distances(patterns, clustering);
        CHECK(dist.cols == 1);
    }
}

TEST_CASE("inconsistent pattern lengths are rejected") {
    std::vector<DemandPattern> patterns{make_pattern({1.0, 2.0}, "a"),
                                        make_pattern({1.0, 2.0, 3.0}, "b")};
    CHECK_THROWS_WITH_AS(cluster::kmeans(patterns, 1, ClusterMethod::euclidean()),
                         "inconsistent pattern lengths", std::invalid_argument);
}

TEST_CASE("empty-cluster repair keeps every cluster populated") {
    // three identical points force empty clusters at k = 3 under any seeding
    std::vector<DemandPattern> patterns;
    for (int i = 0; i < 6; ++i) {
        DemandPattern p = make_pattern({1.0, 1.0, 1.0, static_cast<double>(i < 3 ? 0 : 9)},
                                       "p" + std::to_string(i));
        p.normalized = true;
        patterns.push_back(std::move(p));
    }
    cluster::Options opts;
    opts.seed = 3;
    const auto clustering = cluster::kmeans(patterns, 3, ClusterMethod::euclidean(), opts);
    std::set<int> used(clustering.assignments.begin(), clustering.assignments.end());
    CHECK(used.size() == 3);
}
