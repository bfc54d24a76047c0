// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include "aquaclust/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "aquaclust/csv.hpp"
#include "aquaclust/parallel.hpp"

namespace aquaclust::synth {

namespace {

struct Bump {
    double center_hours;
    double sigma_hours;
    double mass_fraction;
};

// Demand shape templates. Work households concentrate usage on a sharp
// morning peak and an evening peak with an empty midday; home households
// spread usage across the day. The anomaly shapes follow the outlier
// patterns the toolkit is meant to flag: a dominant morning peak with no
// evening, and three separate peaks.
std::vector<Bump> bump_template(ProfileLabel label) {
    switch (label) {
        case ProfileLabel::work:
            return {{7.0, 0.8, 0.45}, {19.5, 1.5, 0.55}};
        case ProfileLabel::home:
            return {{8.0, 1.0, 0.26}, {13.0, 2.2, 0.38}, {19.5, 1.8, 0.36}};
        case ProfileLabel::anomaly_morning_only:
            return {{8.5, 0.7, 1.0}};
        case ProfileLabel::anomaly_triple_peak:
            return {{7.0, 0.6, 0.34}, {13.0, 0.6, 0.33}, {19.0, 0.6, 0.33}};
    }
    return {};
}

// Spread `volume` liters over the day's bins as a circularly wrapped
// Gaussian. Normalizing the wrapped weights conserves the volume exactly, no
// matter where the shifted center lands.
void add_bump(std::vector<double>& day, double center_hours, double sigma_hours, double volume) {
    const std::size_t bins = day.size();
    const double bin_hours = 24.0 / static_cast<double>(bins);
    std::vector<double> weights(bins);
    double total = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        const double t = (static_cast<double>(b) + 0.5) * bin_hours;
        double w = 0.0;
        for (int k = -1; k <= 1; ++k) {
            const double dt = (t - center_hours + 24.0 * k) / sigma_hours;
            w += std::exp(-0.5 * dt * dt);
        }
        weights[b] = w;
        total += w;
    }
    const double scale = volume / total;
    for (std::size_t b = 0; b < bins; ++b) day[b] += weights[b] * scale;
}

constexpr std::size_t kBinsPerDay = 48;

// 2023-01-02 (a Monday), midnight UTC
const std::int64_t kStartEpoch = io::days_from_civil(2023, 1, 2) * 86400;

}  // namespace

const char* profile_label_name(ProfileLabel label) {
    switch (label) {
        case ProfileLabel::work: return "work";
        case ProfileLabel::home: return "home";
        case ProfileLabel::anomaly_morning_only: return "anomaly_morning";
        case ProfileLabel::anomaly_triple_peak: return "anomaly_triple";
    }
    return "home";
}

Experiment experiment_from_name(const std::string& name) {
    if (name == "single_person") return Experiment::single_person;
    if (name == "multi_person") return Experiment::multi_person;
    if (name == "with_anomalies") return Experiment::with_anomalies;
    throw std::invalid_argument("unknown experiment: " + name);
}

const char* experiment_name(Experiment e) {
    switch (e) {
        case Experiment::single_person: return "single_person";
        case Experiment::multi_person: return "multi_person";
        case Experiment::with_anomalies: return "with_anomalies";
    }
    return "single_person";
}

TimeSeries generate_household(const HouseholdProfile& profile, int days, Rng& rng,
                              std::string id) {
    if (days < 1) throw std::invalid_argument("need at least one day");
    if (profile.residents < 1) throw std::invalid_argument("residents must be at least 1");
    if (profile.noise_level < 0.0) throw std::invalid_argument("noise level must be >= 0");

    const auto bumps = bump_template(profile.label);
    const double shift_hours = profile.peak_shift_minutes / 60.0;
    const double daily_total = profile.base_consumption * profile.residents;

    // persistent routine offset per household (most households near the
    // template timing, a few far out); days jitter uniformly around it
    const double offset =
        std::clamp(rng.next_normal() * shift_hours / 3.0, -shift_hours, shift_hours);

    TimeSeries ts;
    ts.id = std::move(id);
    ts.interval_seconds = 86400 / kBinsPerDay;
    ts.start_epoch_seconds = kStartEpoch;
    ts.values.assign(static_cast<std::size_t>(days) * kBinsPerDay, 0.0);

    std::vector<double> day(kBinsPerDay);
    for (int d = 0; d < days; ++d) {
        std::fill(day.begin(), day.end(), 0.0);
        const double jitter = rng.uniform(-shift_hours / 3.0, shift_hours / 3.0);
        for (const Bump& bump : bumps) {
            const double factor =
                std::max(0.05, 1.0 + profile.noise_level * rng.next_normal());
            add_bump(day, bump.center_hours + offset + jitter, bump.sigma_hours,
                     bump.mass_fraction * daily_total * factor);
        }
        std::copy(day.begin(), day.end(),
                  ts.values.begin() + static_cast<std::size_t>(d) * kBinsPerDay);
    }
    return ts;
}

LabeledDataset generate_dataset(Experiment experiment, const SynthOptions& opts) {
    const int n = opts.n_households;
    if (n < 2) throw std::invalid_argument("need at least two households");
    if (experiment == Experiment::with_anomalies && n < 4) {
        throw std::invalid_argument("anomaly experiment needs at least four households");
    }

    LabeledDataset dataset;
    dataset.seed = opts.seed;
    dataset.profiles.resize(static_cast<std::size_t>(n));
    dataset.labels.resize(static_cast<std::size_t>(n));

    for (int h = 0; h < n; ++h) {
        HouseholdProfile profile;
        profile.peak_shift_minutes = opts.jitter_minutes;
        profile.noise_level = opts.noise_level;
        std::string label;
        switch (experiment) {
            case Experiment::single_person:
                profile.label = h < n / 2 ? ProfileLabel::work : ProfileLabel::home;
                profile.residents = 1;
                profile.base_consumption = 120.0;
                label = profile_label_name(profile.label);
                break;
            case Experiment::multi_person: {
                const int residents = h % 5 + 1;
                profile.residents = residents;
                profile.label = residents >= 3 ? ProfileLabel::home : ProfileLabel::work;
                profile.base_consumption = 110.0;
                label = residents >= 3 ? "family" : "non_family";
                break;
            }
            case Experiment::with_anomalies:
                if (h >= n - 2) {
                    profile.label = (h == n - 2) ? ProfileLabel::anomaly_morning_only
                                                 : ProfileLabel::anomaly_triple_peak;
                } else {
                    profile.label = h < (n - 2) / 2 ? ProfileLabel::work : ProfileLabel::home;
                }
                profile.residents = 1;
                profile.base_consumption = 120.0;
                label = profile_label_name(profile.label);
                break;
        }
        dataset.profiles[static_cast<std::size_t>(h)] = profile;
        dataset.labels[static_cast<std::size_t>(h)] = label;
    }

    // fixed per-household seeds so generation order cannot matter
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n));
    SplitMix64 master(opts.seed);
    for (auto& s : seeds) s = master.next();

    dataset.raw.resize(static_cast<std::size_t>(n));
    dataset.patterns.resize(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t h) {
        char id[16];
        std::snprintf(id, sizeof(id), "hh%03zu", h);
        Rng rng(seeds[h]);
        dataset.raw[h] = generate_household(dataset.profiles[h], opts.days, rng, id);
        DemandPattern pattern = periodic_mean(dataset.raw[h], opts.period);
        dataset.patterns[h] = smooth(pattern, opts.smoothing_window);
    });
    return dataset;
}

}  // namespace aquaclust::synth
