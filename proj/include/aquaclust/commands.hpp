// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace aquaclust::cli {

// Invalid flag combinations (CLI exit code 1).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Every command writes its artifacts into out_dir with fixed file names and
// returns the summary it also wrote there as JSON.

struct PatternsConfig {
    std::filesystem::path input;
    std::filesystem::path out_dir;
    std::size_t period = 48;
    std::size_t window = 4;
    bool normalize = false;
    bool split_weekend = false;
    std::int64_t bin_seconds = 1800;
};
// raw meter CSV -> patterns.csv + patterns_summary.json
nlohmann::json cmd_patterns(const PatternsConfig& cfg);

struct ClusterConfig {
    std::filesystem::path input;  // patterns.csv
    std::filesystem::path out_dir;
    std::string method = "sdtw";
    int k = 2;
    double gamma = 1.0;
    std::uint64_t seed = 0;
    int restarts = 8;
    std::optional<bool> normalize;  // method default when unset
};
// -> assignments.csv + centers.csv + cluster_summary.json
nlohmann::json cmd_cluster(const ClusterConfig& cfg);

struct AnalyzeConfig {
    std::filesystem::path input;
    std::filesystem::path out_dir;
    std::string method = "sdtw";
    int k_min = 2;
    int k_max = 6;
    double gamma = 1.0;
    std::uint64_t seed = 0;
    int restarts = 8;
    std::optional<bool> normalize;
};
// -> analysis.csv + analysis_summary.json (with best_k)
nlohmann::json cmd_analyze(const AnalyzeConfig& cfg);

struct EvaluateConfig {
    std::filesystem::path assignments;
    std::filesystem::path truth;
    std::filesystem::path out_dir;
};
// -> metrics.json (SR, ER, confusion counts, matched mapping)
nlohmann::json cmd_evaluate(const EvaluateConfig& cfg);

struct SilhouetteConfig {
    std::filesystem::path patterns;
    std::filesystem::path assignments;
    std::filesystem::path out_dir;
    std::string method = "sdtw";
    double gamma = 1.0;
    std::optional<bool> normalize;
};
// -> silhouette.csv + outliers.csv + silhouette_summary.json
nlohmann::json cmd_silhouette(const SilhouetteConfig& cfg);

struct SynthConfig {
    std::filesystem::path out_dir;
    std::string experiment = "single_person";
    int n_households = 100;
    int days = 100;
    std::uint64_t seed = 1;
    double jitter_minutes = 90.0;
    double noise_level = 0.25;
    std::size_t period = 48;
    std::size_t window = 4;
};
// -> raw.csv + truth.csv + synth_summary.json
nlohmann::json cmd_synth(const SynthConfig& cfg);

}  // namespace aquaclust::cli
