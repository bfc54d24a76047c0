// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include "aquaclust/commands.hpp"

#include <iostream>
#include <map>

#include "aquaclust/csv.hpp"
#include "aquaclust/kernels.hpp"
#include "aquaclust/kmeans.hpp"
#include "aquaclust/parallel.hpp"
#include "aquaclust/synth.hpp"
#include "aquaclust/validation.hpp"

namespace aquaclust::cli {

namespace {

using nlohmann::json;

void ensure_out_dir(const std::filesystem::path& dir) {
    if (dir.empty()) throw UsageError("--out directory is required");
    std::filesystem::create_directories(dir);
}

void write_json(const std::filesystem::path& path, const json& j) {
    io::write_file_atomic(path, j.dump(2) + "\n");
}

cluster::ClusterMethod make_method(const std::string& name, double gamma,
                                   std::optional<bool> normalize) {
    cluster::ClusterMethod method;
    method.kind = cluster::method_from_name(name);
    if (method.kind == cluster::MethodKind::sdtw) {
        if (!(gamma > 0.0)) throw UsageError("--gamma must be positive");
        method.gamma = gamma;
    }
    method.normalize_input =
        normalize.value_or(method.kind != cluster::MethodKind::simple);
    return method;
}

json method_json(const cluster::ClusterMethod& method) {
    json j;
    j["method"] = cluster::method_name(method.kind);
    if (method.kind == cluster::MethodKind::sdtw) j["gamma"] = method.gamma;
    j["normalize"] = method.normalize_input;
    return j;
}

json runtime_json() {
    json j;
    j["simd"] = kernels::isa_name(kernels::active_isa());
    j["threads"] = thread_budget();
    return j;
}

// day-sliced pattern pipeline shared by cmd_patterns
struct MeterPatterns {
    std::vector<DemandPattern> patterns;
    std::size_t dropped_samples = 0;
    bool skipped = false;
};

MeterPatterns build_patterns(const TimeSeries& ts, const PatternsConfig& cfg) {
    MeterPatterns result;
    const std::size_t period = cfg.period;
    const std::int64_t day_seconds = cfg.bin_seconds * static_cast<std::int64_t>(period);
    const std::int64_t start = ts.start_epoch_seconds.value_or(0);

    // align day slices to midnight
    const std::int64_t misalign = ((start % day_seconds) + day_seconds) % day_seconds;
    const std::size_t lead =
        misalign == 0 ? 0
                      : static_cast<std::size_t>((day_seconds - misalign) / cfg.bin_seconds);
    if (ts.values.size() < lead + period) {
        result.skipped = true;
        result.dropped_samples = ts.values.size();
        return result;
    }
    const std::size_t n_days = (ts.values.size() - lead) / period;
    result.dropped_samples = ts.values.size() - n_days * period;

    auto finish = [&](std::vector<double> values, DayClass day_class, int n_periods) {
        DemandPattern pattern;
        pattern.values = std::move(values);
        pattern.n_periods = n_periods;
        pattern.day_class = day_class;
        pattern.id = ts.id;
        pattern = smooth(pattern, cfg.window);
        if (cfg.normalize) pattern = min_max_normalize(pattern);
        result.patterns.push_back(std::move(pattern));
    };

    if (!cfg.split_weekend) {
        std::vector<std::span<const double>> days;
        days.reserve(n_days);
        for (std::size_t d = 0; d < n_days; ++d) {
            days.emplace_back(ts.values.data() + lead + d * period, period);
        }
        finish(mean_of_days(days), DayClass::all, static_cast<int>(n_days));
        return result;
    }

    std::vector<std::span<const double>> weekdays;
    std::vector<std::span<const double>> weekends;
    for (std::size_t d = 0; d < n_days; ++d) {
        const std::int64_t day_start =
            start + static_cast<std::int64_t>(lead + d * period) * cfg.bin_seconds;
        auto& bucket = io::is_weekend_day(day_start) ? weekends : weekdays;
        bucket.emplace_back(ts.values.data() + lead + d * period, period);
    }
    if (!weekdays.empty()) {
        finish(mean_of_days(weekdays), DayClass::weekday, static_cast<int>(weekdays.size()));
    }
    if (!weekends.empty()) {
        finish(mean_of_days(weekends), DayClass::weekend, static_cast<int>(weekends.size()));
    }
    return result;
}

}  // namespace

json cmd_patterns(const PatternsConfig& cfg) {
    if (cfg.period < 2) throw UsageError("--period must be at least 2");
    if (cfg.window < 1) throw UsageError("--window must be at least 1");
    if (cfg.window > cfg.period) throw UsageError("--window cannot exceed --period");
    ensure_out_dir(cfg.out_dir);

    const auto records = io::read_raw_csv(cfg.input);
    if (records.empty()) throw io::DataError(cfg.input.string() + ": no data rows");
    const auto series = io::resample(records, cfg.bin_seconds);

    std::vector<DemandPattern> patterns;
    std::vector<std::string> skipped;
    std::size_t dropped_samples = 0;
    for (const auto& ts : series) {
        MeterPatterns mp = build_patterns(ts, cfg);
        dropped_samples += mp.dropped_samples;
        if (mp.skipped) {
            skipped.push_back(ts.id);
            std::cerr << "warning: meter " << ts.id << " has less than one full day, skipped\n";
            continue;
        }
        for (auto& p : mp.patterns) patterns.push_back(std::move(p));
    }
    if (patterns.empty()) throw io::DataError("no meter produced a full day of data");

    io::write_patterns_csv(cfg.out_dir / "patterns.csv", patterns);

    json summary;
    summary["command"] = "patterns";
    summary["config"] = {{"input", cfg.input.string()},     {"period", cfg.period},
                         {"window", cfg.window},            {"normalize", cfg.normalize},
                         {"split_weekend", cfg.split_weekend},
                         {"bin_seconds", cfg.bin_seconds}};
    summary["meters"] = series.size();
    summary["patterns"] = patterns.size();
    summary["skipped_meters"] = skipped;
    summary["dropped_trailing_samples"] = dropped_samples;
    summary["runtime"] = runtime_json();
    write_json(cfg.out_dir / "patterns_summary.json", summary);
    return summary;
}

json cmd_cluster(const ClusterConfig& cfg) {
    if (cfg.k < 1) throw UsageError("--k must be at least 1");
    if (cfg.restarts < 1) throw UsageError("--restarts must be at least 1");
    const cluster::ClusterMethod method = make_method(cfg.method, cfg.gamma, cfg.normalize);
    ensure_out_dir(cfg.out_dir);

    const auto patterns = io::read_patterns_csv(cfg.input);
    cluster::Options opts;
    opts.seed = cfg.seed;
    opts.n_restarts = cfg.restarts;
    const cluster::Clustering clustering = cluster::kmeans(patterns, cfg.k, method, opts);

    std::vector<io::AssignmentRow> assignment_rows;
    assignment_rows.reserve(patterns.size());
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        assignment_rows.push_back(
            io::AssignmentRow{patterns[i].id, patterns[i].day_class, clustering.assignments[i]});
    }
    io::write_assignments_csv(cfg.out_dir / "assignments.csv", assignment_rows);

    std::vector<io::CenterRow> center_rows;
    const bool feature_space = method.kind == cluster::MethodKind::simple;
    if (method.kind == cluster::MethodKind::sdtw) {
        // emit the barycenter and the plain within-cluster mean side by side
        const auto rows = cluster::prepare_rows(patterns, method);
        const auto means = cluster::cluster_means(rows, clustering.assignments, cfg.k);
        for (int c = 0; c < cfg.k; ++c) {
            center_rows.push_back(
                io::CenterRow{c, "barycenter", clustering.centers[static_cast<std::size_t>(c)]});
            center_rows.push_back(io::CenterRow{c, "mean", means[static_cast<std::size_t>(c)]});
        }
    } else {
        const char* kind = feature_space ? "feature" : "mean";
        for (int c = 0; c < cfg.k; ++c) {
            center_rows.push_back(
                io::CenterRow{c, kind, clustering.centers[static_cast<std::size_t>(c)]});
        }
    }
    io::write_centers_csv(cfg.out_dir / "centers.csv", center_rows, feature_space);

    json summary;
    summary["command"] = "cluster";
    summary["config"] = method_json(method);
    summary["config"]["input"] = cfg.input.string();
    summary["config"]["k"] = cfg.k;
    summary["config"]["restarts"] = cfg.restarts;
    summary["seed"] = cfg.seed;
    summary["objective"] = clustering.objective;
    summary["n_iter"] = clustering.n_iter;
    summary["n_patterns"] = patterns.size();
    summary["runtime"] = runtime_json();
    write_json(cfg.out_dir / "cluster_summary.json", summary);
    return summary;
}

json cmd_analyze(const AnalyzeConfig& cfg) {
    if (cfg.k_min < 2 || cfg.k_min > cfg.k_max) {
        throw UsageError("--k-range must satisfy 2 <= A <= B");
    }
    if (cfg.restarts < 1) throw UsageError("--restarts must be at least 1");
    const cluster::ClusterMethod method = make_method(cfg.method, cfg.gamma, cfg.normalize);
    ensure_out_dir(cfg.out_dir);

    const auto patterns = io::read_patterns_csv(cfg.input);
    cluster::Options opts;
    opts.seed = cfg.seed;
    opts.n_restarts = cfg.restarts;
    const validation::ClusterAnalysis analysis =
        validation::cluster_analysis(patterns, cfg.k_min, cfg.k_max, method, opts);

    std::vector<io::AnalysisRowOut> rows;
    for (const auto& r : analysis.rows) {
        rows.push_back(io::AnalysisRowOut{r.k, r.mean_silhouette, r.objective});
    }
    io::write_analysis_csv(cfg.out_dir / "analysis.csv", rows);

    json summary;
    summary["command"] = "analyze";
    summary["config"] = method_json(method);
    summary["config"]["input"] = cfg.input.string();
    summary["config"]["k_min"] = cfg.k_min;
    summary["config"]["k_max"] = cfg.k_max;
    summary["config"]["restarts"] = cfg.restarts;
    summary["seed"] = cfg.seed;
    summary["best_k"] = analysis.best_k;
    summary["n_patterns"] = patterns.size();
    summary["runtime"] = runtime_json();
    write_json(cfg.out_dir / "analysis_summary.json", summary);
    return summary;
}

json cmd_evaluate(const EvaluateConfig& cfg) {
    ensure_out_dir(cfg.out_dir);
    const auto assignment_rows = io::read_assignments_csv(cfg.assignments);
    const auto truth_map = io::read_truth_csv(cfg.truth);
    if (assignment_rows.empty()) throw io::DataError("no assignments to evaluate");

    std::vector<int> assignments;
    std::vector<std::string> truth;
    for (const auto& row : assignment_rows) {
        const auto it = truth_map.find(row.meter_id);
        if (it == truth_map.end()) {
            throw io::DataError("unknown id in assignments: " + row.meter_id);
        }
        assignments.push_back(row.cluster);
        truth.push_back(it->second);
    }

    const validation::ScoreReport report = validation::success_rate(assignments, truth);

    json metrics;
    metrics["command"] = "evaluate";
    metrics["n"] = assignments.size();
    metrics["success_rate"] = report.success_rate;
    metrics["error_rate"] = report.error_rate;
    metrics["confusion"] = {{"tp", report.counts.tp},
                            {"tn", report.counts.tn},
                            {"fp", report.counts.fp},
                            {"fn", report.counts.fn}};
    json mapping = json::object();
    for (std::size_t c = 0; c < report.mapping.size(); ++c) {
        mapping[std::to_string(c)] = report.mapping[c];
    }
    metrics["mapping"] = mapping;
    write_json(cfg.out_dir / "metrics.json", metrics);
    return metrics;
}

json cmd_silhouette(const SilhouetteConfig& cfg) {
    const cluster::ClusterMethod method = make_method(cfg.method, cfg.gamma, cfg.normalize);
    ensure_out_dir(cfg.out_dir);

    const auto patterns = io::read_patterns_csv(cfg.patterns);
    const auto assignment_rows = io::read_assignments_csv(cfg.assignments);

    std::map<std::pair<std::string, int>, int> assignment_index;
    for (const auto& row : assignment_rows) {
        assignment_index[{row.meter_id, static_cast<int>(row.day_class)}] = row.cluster;
    }
    std::vector<int> assignments;
    int k = 0;
    for (const auto& p : patterns) {
        const auto it = assignment_index.find({p.id, static_cast<int>(p.day_class)});
        if (it == assignment_index.end()) {
            throw io::DataError("no assignment for pattern " + p.id);
        }
        assignments.push_back(it->second);
        k = std::max(k, it->second + 1);
    }

    std::vector<std::string> ids;
    for (const auto& p : patterns) ids.push_back(p.id);
    const Matrix dist = validation::pairwise_distances(patterns, method);
    const validation::SilhouetteReport report = validation::silhouette(dist, assignments, k, ids);
    const auto outliers = validation::flag_outliers(report);

    std::vector<io::SilhouetteRowOut> rows;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        rows.push_back(io::SilhouetteRowOut{patterns[i].id, patterns[i].day_class,
                                            report.per_member[i].cluster,
                                            report.per_member[i].value});
    }
    io::write_silhouette_csv(cfg.out_dir / "silhouette.csv", rows);

    std::map<std::string, std::size_t> pattern_by_id;
    for (std::size_t i = 0; i < patterns.size(); ++i) pattern_by_id[patterns[i].id] = i;
    std::vector<io::SilhouetteRowOut> outlier_rows;
    for (const auto& e : outliers) {
        const std::size_t i = pattern_by_id.at(e.id);
        outlier_rows.push_back(
            io::SilhouetteRowOut{e.id, patterns[i].day_class, e.cluster, e.value});
    }
    io::write_outliers_csv(cfg.out_dir / "outliers.csv", outlier_rows);

    json summary;
    summary["command"] = "silhouette";
    summary["config"] = method_json(method);
    summary["config"]["patterns"] = cfg.patterns.string();
    summary["config"]["assignments"] = cfg.assignments.string();
    summary["k"] = report.k;
    summary["mean_silhouette"] = report.mean;
    summary["outliers"] = outlier_rows.size();
    summary["runtime"] = runtime_json();
    write_json(cfg.out_dir / "silhouette_summary.json", summary);
    return summary;
}

json cmd_synth(const SynthConfig& cfg) {
    if (cfg.n_households < 2) throw UsageError("--n must be at least 2");
    if (cfg.days < 1) throw UsageError("--days must be at least 1");
    if (cfg.noise_level < 0.0) throw UsageError("--noise must be >= 0");
    if (cfg.jitter_minutes < 0.0) throw UsageError("--jitter must be >= 0");
    const synth::Experiment experiment = synth::experiment_from_name(cfg.experiment);
    ensure_out_dir(cfg.out_dir);

    synth::SynthOptions opts;
    opts.n_households = cfg.n_households;
    opts.days = cfg.days;
    opts.seed = cfg.seed;
    opts.jitter_minutes = cfg.jitter_minutes;
    opts.noise_level = cfg.noise_level;
    opts.period = cfg.period;
    opts.smoothing_window = cfg.window;

    const synth::LabeledDataset dataset = synth::generate_dataset(experiment, opts);

    io::write_raw_csv(cfg.out_dir / "raw.csv", dataset.raw);
    std::vector<std::string> ids;
    for (const auto& ts : dataset.raw) ids.push_back(ts.id);
    io::write_truth_csv(cfg.out_dir / "truth.csv", ids, dataset.labels);

    json summary;
    summary["command"] = "synth";
    summary["config"] = {{"experiment", cfg.experiment},
                         {"n_households", cfg.n_households},
                         {"days", cfg.days},
                         {"jitter_minutes", cfg.jitter_minutes},
                         {"noise_level", cfg.noise_level},
                         {"period", cfg.period},
                         {"window", cfg.window}};
    summary["seed"] = cfg.seed;
    write_json(cfg.out_dir / "synth_summary.json", summary);
    return summary;
}

}  // namespace aquaclust::cli
