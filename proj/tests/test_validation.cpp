// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include <stdexcept>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <doctest.h>

#include "aquaclust/rng.hpp"
#include "aquaclust/validation.hpp"

using namespace aquaclust;
using cluster::ClusterMethod;

namespace {

DemandPattern make_pattern(std::vector<double> values, std::string id) {
    DemandPattern p;
    p.values = std::move(values);
    p.id = std::move(id);
    p.normalized = true;
    return p;
}

// all injective cluster -> label mappings, for the optimality check
long long best_agreement_by_enumeration(const std::vector<int>& assignments,
                                        const std::vector<std::string>& truth) {
    std::vector<std::string> labels(truth.begin(), truth.end());
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
    const int k = *std::max_element(assignments.begin(), assignments.end()) + 1;

    std::vector<int> perm(labels.size());
    std::iota(perm.begin(), perm.end(), 0);
    long long best = -1;
    do {
        long long agreement = 0;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (assignments[i] < k &&
                labels[static_cast<std::size_t>(perm[static_cast<std::size_t>(assignments[i])])] ==
                    truth[i]) {
                ++agreement;
            }
        }
        best = std::max(best, agreement);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

}  // namespace

TEST_CASE("match_labels examples") {
    CHECK(validation::match_labels({0, 0, 1, 1}, {"A", "A", "B", "B"}) ==
          std::vector<std::string>{"A", "B"});
    CHECK(validation::match_labels({1, 1, 0, 0}, {"A", "A", "B", "B"}) ==
          std::vector<std::string>{"B", "A"});
    CHECK(validation::match_labels({0, 0, 1, 1}, {"A", "A", "A", "B"}) ==
          std::vector<std::string>{"A", "B"});
    CHECK_THROWS_AS(validation::match_labels({}, {}), std::invalid_argument);
}

TEST_CASE("match_labels is optimal among one-to-one mappings") {
    Rng rng(13);
    const std::vector<std::string> names{"A", "B", "C", "D"};
    for (int trial = 0; trial < 30; ++trial) {
        const int k = 2 + static_cast<int>(rng.next_index(3));
        std::vector<int> assignments(40);
        std::vector<std::string> truth(40);
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            assignments[i] = static_cast<int>(rng.next_index(static_cast<std::size_t>(k)));
            truth[i] = names[rng.next_index(4)];
        }
        const auto mapping = validation::match_labels(assignments, truth);
        long long agreement = 0;
        for (std::size_t i = 0; i < assignments.size(); ++i) {
            if (mapping[static_cast<std::size_t>(assignments[i])] == truth[i]) ++agreement;
        }
        CHECK(agreement == best_agreement_by_enumeration(assignments, truth));
    }
}

TEST_CASE("success rate reproduces the 82% confusion arithmetic") {
    // 100 patterns: cluster 0 holds 41 A and 9 B, cluster 1 holds 41 B and 9 A
    std::vector<int> assignments;
    std::vector<std::string> truth;
    for (int i = 0; i < 41; ++i) { assignments.push_back(0); truth.emplace_back("A"); }
    for (int i = 0; i < 9; ++i) { assignments.push_back(0); truth.emplace_back("B"); }
    for (int i = 0; i < 41; ++i) { assignments.push_back(1); truth.emplace_back("B"); }
    for (int i = 0; i < 9; ++i) { assignments.push_back(1); truth.emplace_back("A"); }

    const auto report = validation::success_rate(assignments, truth);
    CHECK(report.counts.tp == 41);
    CHECK(report.counts.tn == 41);
    CHECK(report.counts.fp == 9);
    CHECK(report.counts.fn == 9);
    CHECK(report.counts.total() == 100);
    CHECK(report.success_rate == 0.82);
    CHECK(report.error_rate == doctest::Approx(0.18).epsilon(1e-15));
    CHECK(report.success_rate + report.error_rate == 1.0);
}

TEST_CASE("perfect clustering scores SR = 1") {
    const auto report = validation::success_rate({0, 0, 1, 1}, {"A", "A", "B", "B"});
    CHECK(report.success_rate == 1.0);
    CHECK(report.error_rate == 0.0);
}

TEST_CASE("three-of-four example") {
    const auto report = validation::success_rate({0, 0, 1, 1}, {"A", "A", "A", "B"});
    CHECK(report.success_rate == 0.75);
    CHECK(report.counts.total() == 4);
}

TEST_CASE("SR is invariant under index and label permutations") {
    Rng rng(31);
    std::vector<int> assignments(50);
    std::vector<std::string> truth(50);
    const std::vector<std::string> names{"x", "y", "z"};
    for (std::size_t i = 0; i < 50; ++i) {
        assignments[i] = static_cast<int>(rng.next_index(3));
        truth[i] = names[rng.next_index(3)];
    }
    const double base = validation::success_rate(assignments, truth).success_rate;

    std::vector<int> relabeled(50);
    const int perm[3] = {2, 0, 1};
    for (std::size_t i = 0; i < 50; ++i) relabeled[i] = perm[assignments[i]];
    CHECK(validation::success_rate(relabeled, truth).success_rate == base);

    std::vector<std::string> renamed(50);
    for (std::size_t i = 0; i < 50; ++i) {
        renamed[i] = truth[i] == "x" ? "qq" : (truth[i] == "y" ? "aa" : "mm");
    }
    CHECK(validation::success_rate(assignments, renamed).success_rate == base);
}

TEST_CASE("silhouette: 1-d hand computation") {
    // points {0, 1} vs {10, 11} under squared Euclidean
    std::vector<DemandPattern> patterns{make_pattern({0.0}, "a"), make_pattern({1.0}, "b"),
                                        make_pattern({10.0}, "c"), make_pattern({11.0}, "d")};
    const auto dist = validation::pairwise_distances(patterns, ClusterMethod::euclidean());
    CHECK(dist.at(0, 1) == 1.0);
    CHECK(dist.at(0, 2) == 100.0);
    CHECK(dist.at(0, 3) == 121.0);

    const auto report =
        validation::silhouette(dist, {0, 0, 1, 1}, 2, {"a", "b", "c", "d"});
    CHECK(report.per_member[0].value == doctest::Approx(109.5 / 110.5).epsilon(1e-9));
    for (const auto& e : report.per_member) {
        CHECK(e.value >= -1.0);
        CHECK(e.value <= 1.0);
    }
    CHECK(report.mean ==
          doctest::Approx((report.per_member[0].value + report.per_member[1].value +
                           report.per_member[2].value + report.per_member[3].value) /
                          4.0));
}

TEST_CASE("silhouette conventions") {
    SUBCASE("two co-located clusters score zero everywhere") {
        std::vector<DemandPattern> patterns;
        for (int i = 0; i < 6; ++i) patterns.push_back(make_pattern({1.0, 2.0}, "p"));
        const auto dist = validation::pairwise_distances(patterns, ClusterMethod::euclidean());
        const auto report = validation::silhouette(dist, {0, 1, 0, 1, 0, 1}, 2,
                                                 {"a", "b", "c", "d", "e", "f"});
        for (const auto& e : report.per_member) CHECK(e.value == 0.0);
    }

    SUBCASE("singleton cluster members score zero") {
        std::vector<DemandPattern> patterns{make_pattern({0.0}, "a"), make_pattern({0.1}, "b"),
                                            make_pattern({9.0}, "c")};
        const auto dist = validation::pairwise_distances(patterns, ClusterMethod::euclidean());
        const auto report = validation::silhouette(dist, {0, 0, 1}, 2, {"a", "b", "c"});
        CHECK(report.per_member[2].value == 0.0);
        CHECK(report.per_member[0].value > 0.0);
    }

    SUBCASE("k < 2 is rejected") {
        std::vector<DemandPattern> patterns{make_pattern({0.0}, "a"), make_pattern({1.0}, "b")};
        const auto dist = validation::pairwise_distances(patterns, ClusterMethod::euclidean());
        CHECK_THROWS_WITH_AS(validation::silhouette(dist, {0, 0}, 1, {"a", "b"}),
                             "silhouette undefined for a single cluster", std::invalid_argument);
    }
}

TEST_CASE("silhouette is invariant under positive scaling of the distances") {
    Rng rng(37);
    std::vector<DemandPattern> patterns;
    for (int i = 0; i < 12; ++i) {
        std::vector<double> v(5);
        for (auto& x : v) x = rng.uniform(0.0, 1.0);
        patterns.push_back(make_pattern(std::move(v), "p" + std::to_string(i)));
    }
    std::vector<int> assignments(12);
    for (std::size_t i = 0; i < 12; ++i) assignments[i] = static_cast<int>(i % 3);
    std::vector<std::string> ids;
    for (const auto& p : patterns) ids.push_back(p.id);

    auto dist = validation::pairwise_distances(patterns, ClusterMethod::euclidean());
    const auto base = validation::silhouette(dist, assignments, 3, ids);
    for (auto& v : dist.data) v *= 37.5;
    const auto scaled = validation::silhouette(dist, assignments, 3, ids);
    for (std::size_t i = 0; i < 12; ++i) {
        CHECK(scaled.per_member[i].value ==
              doctest::Approx(base.per_member[i].value).epsilon(1e-12));
    }
}

TEST_CASE("sdtw distance matrix is a zero-diagonal symmetric dissimilarity") {
    Rng rng(41);
    std::vector<DemandPattern> patterns;
    for (int i = 0; i < 8; ++i) {
        std::vector<double> v(12);
        for (auto& x : v) x = rng.uniform(0.0, 1.0);
        patterns.push_back(make_pattern(std::move(v), "p" + std::to_string(i)));
    }
    const auto dist = validation::pairwise_distances(patterns, ClusterMethod::sdtw(1.0));
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(dist.at(i, i) == 0.0);
        for (std::size_t j = 0; j < 8; ++j) {
            CHECK(dist.at(i, j) == dist.at(j, i));
            CHECK(dist.at(i, j) >= 0.0);
        }
    }
}

TEST_CASE("flag_outliers") {
    validation::SilhouetteReport report;
    report.k = 2;
    report.per_member = {{"a", 0, 0.5}, {"b", 0, -0.2}, {"c", 1, 0.0}, {"d", 1, -0.7}};

    const auto flagged = validation::flag_outliers(report);
    CHECK(flagged.size() == 2);
    CHECK(flagged[0].id == "d");  // most negative first
    CHECK(flagged[1].id == "b");

    report.per_member = {{"a", 0, 0.5}, {"c", 1, 0.0}};
    CHECK(validation::flag_outliers(report).empty());
}

TEST_CASE("cluster_analysis finds the planted group count") {
    Rng rng(43);
    std::vector<DemandPattern> patterns;
    for (int g = 0; g < 3; ++g) {
        for (int i = 0; i < 8; ++i) {
            std::vector<double> v(6);
            for (std::size_t j = 0; j < 6; ++j) {
                v[j] = 3.0 * g + rng.uniform(-0.05, 0.05) + (j == static_cast<std::size_t>(g) ? 1.0 : 0.0);
            }
            DemandPattern p = make_pattern(std::move(v), "g" + std::to_string(g) + "_" + std::to_string(i));
            patterns.push_back(std::move(p));
        }
    }
    cluster::Options opts;
    opts.seed = 5;
    opts.n_restarts = 4;
    ClusterMethod method = ClusterMethod::euclidean();
    method.normalize_input = false;
    const auto analysis = validation::cluster_analysis(patterns, 2, 5, method, opts);
    CHECK(analysis.best_k == 3);
    CHECK(analysis.rows.size() == 4);

    CHECK_THROWS_AS(validation::cluster_analysis(patterns, 1, 5, method, opts),
                    std::invalid_argument);
    CHECK_THROWS_AS(validation::cluster_analysis(patterns, 2, 24, method, opts),
                    std::invalid_argument);
}
