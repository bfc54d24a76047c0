// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aquaclust/rng.hpp"
#include "aquaclust/time_series.hpp"

namespace aquaclust::synth {

enum class ProfileLabel { work, home, anomaly_morning_only, anomaly_triple_peak };

const char* profile_label_name(ProfileLabel label);

struct HouseholdProfile {
    ProfileLabel label = ProfileLabel::home;
    int residents = 1;
    double peak_shift_minutes = 90.0;  // routine offset / daily jitter range
    double base_consumption = 120.0;   // liters per day per resident
    double noise_level = 0.25;         // relative std of per-event volumes
};

enum class Experiment { single_person, multi_person, with_anomalies };

Experiment experiment_from_name(const std::string& name);
const char* experiment_name(Experiment e);

struct SynthOptions {
    int n_households = 100;
    int days = 100;
    std::uint64_t seed = 1;
    double jitter_minutes = 90.0;
    double noise_level = 0.25;
    std::size_t period = 48;
    std::size_t smoothing_window = 4;
};

struct LabeledDataset {
    std::vector<DemandPattern> patterns;  // smoothed periodic means, unnormalized
    std::vector<std::string> labels;
    std::vector<HouseholdProfile> profiles;
    std::vector<TimeSeries> raw;
    std::uint64_t seed = 0;
};

// One household's meter series: days x 48 half-hour samples built from
// Gaussian demand bumps. Each household keeps a persistent routine offset and
// every day adds its own jitter on top; bump volumes carry multiplicative
// noise. Bump mass is spread over the day circularly, so a day's total volume
// is independent of the time shifts.
TimeSeries generate_household(const HouseholdProfile& profile, int days, Rng& rng,
                              std::string id = "hh");

LabeledDataset generate_dataset(Experiment experiment, const SynthOptions& opts);

}  // namespace aquaclust::synth
