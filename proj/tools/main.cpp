// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: generates synthetic meter data, builds daily demand
// patterns from raw readings, clusters them, and scores the results.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "aquaclust/commands.hpp"
#include "aquaclust/csv.hpp"

namespace {

bool parse_k_range(const std::string& text, int& lo, int& hi) {
    const auto sep = text.find("..");
    if (sep == std::string::npos) return false;
    try {
        lo = std::stoi(text.substr(0, sep));
        hi = std::stoi(text.substr(sep + 2));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace aquaclust;

    CLI::App app{"daily water demand pattern clustering"};
    app.require_subcommand(1);

    cli::PatternsConfig patterns_cfg;
    auto* patterns = app.add_subcommand("patterns", "build daily demand patterns from raw CSV");
    patterns->add_option("input", patterns_cfg.input, "raw meter CSV")->required();
    patterns->add_option("--out", patterns_cfg.out_dir, "output directory")->required();
    patterns->add_option("--period", patterns_cfg.period, "samples per day");
    patterns->add_option("--window", patterns_cfg.window, "smoothing window (samples)");
    patterns->add_flag("--normalize,!--no-normalize", patterns_cfg.normalize,
                       "min-max normalize the patterns");
    patterns->add_flag("--split-weekend", patterns_cfg.split_weekend,
                       "separate weekday and weekend patterns");
    patterns->add_option("--bin-seconds", patterns_cfg.bin_seconds, "resampling bin size");

    cli::ClusterConfig cluster_cfg;
    bool cluster_normalize = false;
    auto* clusterc = app.add_subcommand("cluster", "k-means clustering of demand patterns");
    clusterc->add_option("input", cluster_cfg.input, "patterns CSV")->required();
    clusterc->add_option("--out", cluster_cfg.out_dir, "output directory")->required();
    clusterc->add_option("--method", cluster_cfg.method, "sdtw, euclidean, or simple");
    clusterc->add_option("--k", cluster_cfg.k, "number of clusters");
    clusterc->add_option("--gamma", cluster_cfg.gamma, "soft-DTW smoothing");
    clusterc->add_option("--seed", cluster_cfg.seed, "RNG seed");
    clusterc->add_option("--restarts", cluster_cfg.restarts, "k-means restarts");
    auto* cluster_norm_flag =
        clusterc->add_flag("--normalize,!--no-normalize", cluster_normalize,
                           "override the method's normalization default");

    cli::AnalyzeConfig analyze_cfg;
    bool analyze_normalize = false;
    std::string k_range = "2..6";
    auto* analyze = app.add_subcommand("analyze", "mean-silhouette sweep over a k range");
    analyze->add_option("input", analyze_cfg.input, "patterns CSV")->required();
    analyze->add_option("--out", analyze_cfg.out_dir, "output directory")->required();
    analyze->add_option("--method", analyze_cfg.method, "sdtw, euclidean, or simple");
    analyze->add_option("--k-range", k_range, "k range, e.g. 2..6");
    analyze->add_option("--gamma", analyze_cfg.gamma, "soft-DTW smoothing");
    analyze->add_option("--seed", analyze_cfg.seed, "RNG seed");
    analyze->add_option("--restarts", analyze_cfg.restarts, "k-means restarts");
    auto* analyze_norm_flag =
        analyze->add_flag("--normalize,!--no-normalize", analyze_normalize,
                          "override the method's normalization default");

    cli::EvaluateConfig evaluate_cfg;
    auto* evaluate = app.add_subcommand("evaluate", "success rate against ground truth");
    evaluate->add_option("assignments", evaluate_cfg.assignments, "assignments CSV")->required();
    evaluate->add_option("truth", evaluate_cfg.truth, "truth CSV")->required();
    evaluate->add_option("--out", evaluate_cfg.out_dir, "output directory")->required();

    cli::SilhouetteConfig silhouette_cfg;
    bool silhouette_normalize = false;
    auto* silhouette = app.add_subcommand("silhouette", "per-member silhouettes and outliers");
    silhouette->add_option("patterns", silhouette_cfg.patterns, "patterns CSV")->required();
    silhouette->add_option("assignments", silhouette_cfg.assignments, "assignments CSV")
        ->required();
    silhouette->add_option("--out", silhouette_cfg.out_dir, "output directory")->required();
    silhouette->add_option("--method", silhouette_cfg.method, "sdtw, euclidean, or simple");
    silhouette->add_option("--gamma", silhouette_cfg.gamma, "soft-DTW smoothing");
    auto* silhouette_norm_flag =
        silhouette->add_flag("--normalize,!--no-normalize", silhouette_normalize,
                             "override the method's normalization default");

    cli::SynthConfig synth_cfg;
    auto* synth = app.add_subcommand("synth", "generate a labeled synthetic dataset");
    synth->add_option("--out", synth_cfg.out_dir, "output directory")->required();
    synth->add_option("--experiment", synth_cfg.experiment,
                      "single_person, multi_person, or with_anomalies");
    synth->add_option("--n", synth_cfg.n_households, "number of households");
    synth->add_option("--days", synth_cfg.days, "days per household");
    synth->add_option("--seed", synth_cfg.seed, "RNG seed");
    synth->add_option("--jitter", synth_cfg.jitter_minutes, "peak shift range (minutes)");
    synth->add_option("--noise", synth_cfg.noise_level, "relative volume noise");
    synth->add_option("--period", synth_cfg.period, "samples per day");
    synth->add_option("--window", synth_cfg.window, "smoothing window (samples)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*patterns) {
            cli::cmd_patterns(patterns_cfg);
        } else if (*clusterc) {
            if (cluster_norm_flag->count() > 0) cluster_cfg.normalize = cluster_normalize;
            cli::cmd_cluster(cluster_cfg);
        } else if (*analyze) {
            if (analyze_norm_flag->count() > 0) analyze_cfg.normalize = analyze_normalize;
            if (!parse_k_range(k_range, analyze_cfg.k_min, analyze_cfg.k_max)) {
                throw cli::UsageError("--k-range must look like A..B");
            }
            cli::cmd_analyze(analyze_cfg);
        } else if (*evaluate) {
            cli::cmd_evaluate(evaluate_cfg);
        } else if (*silhouette) {
            if (silhouette_norm_flag->count() > 0) {
                silhouette_cfg.normalize = silhouette_normalize;
            }
            cli::cmd_silhouette(silhouette_cfg);
        } else if (*synth) {
            cli::cmd_synth(synth_cfg);
        }
    } catch (const cli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const io::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
