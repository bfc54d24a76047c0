// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aquaclust {

enum class DayClass { weekday, weekend, all };

const char* day_class_name(DayClass dc);
DayClass day_class_from_name(const std::string& name);

// Raw meter readings: volume per sampling interval, in liters.
struct TimeSeries {
    std::vector<double> values;
    std::int64_t interval_seconds = 1800;
    std::optional<std::int64_t> start_epoch_seconds;
    std::string id;

    std::size_t size() const { return values.size(); }
};

// Daily demand pattern: one value per intra-day sample, built as a periodic
// mean over n_periods days.
struct DemandPattern {
    std::vector<double> values;
    int n_periods = 1;
    bool normalized = false;
    DayClass day_class = DayClass::all;
    std::string id;

    std::size_t period() const { return values.size(); }
};

struct FeatureVector {
    double mean_workhours = 0.0;
    double std_workhours = 0.0;
};

// Inclusive sample range [first, last].
struct IndexRange {
    std::size_t first = 0;
    std::size_t last = 0;

    std::size_t count() const { return last - first + 1; }
};

// Samples covering 10:00-16:00 for a pattern of `period` samples per day;
// 20..31 at the default 30-minute resolution.
IndexRange work_hours_range(std::size_t period = 48);

// throws std::invalid_argument if the series is empty, non-finite, or the
// interval is not positive
void validate(const TimeSeries& ts);

// Periodic mean over windows of `period_samples`; trailing samples that do
// not fill a whole period are discarded. Requires at least one full period.
DemandPattern periodic_mean(const TimeSeries& ts, std::size_t period_samples);

enum class Boundary {
    circular,  // daily patterns: the day wraps at midnight
    shrink     // raw series: windows shrink at the edges
};

// Centered moving average; for even windows the extra sample is taken from
// the left (offsets -floor(w/2) .. w-1-floor(w/2)).
std::vector<double> moving_average(std::span<const double> values, std::size_t window,
                                   Boundary boundary);

TimeSeries moving_average(const TimeSeries& ts, std::size_t window);

// Circular smoothing of a daily pattern.
DemandPattern smooth(const DemandPattern& pattern, std::size_t window);

// (y - min) / (max - min); a constant pattern maps to all zeros.
DemandPattern min_max_normalize(const DemandPattern& pattern);
std::vector<double> min_max_normalize(std::span<const double> values);

// Mean and population standard deviation over the work-hour window.
FeatureVector work_hour_features(const DemandPattern& pattern);
FeatureVector work_hour_features(const DemandPattern& pattern, IndexRange window);

// Elementwise mean of equally long day slices; building block for the
// weekday/weekend split where the averaged days are not contiguous.
std::vector<double> mean_of_days(const std::vector<std::span<const double>>& days);

}  // namespace aquaclust
