// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include "aquaclust/time_series.hpp"

#include <cmath>
#include <stdexcept>

#include "aquaclust/kernels.hpp"

namespace aquaclust {

const char* day_class_name(DayClass dc) {
    switch (dc) {
        case DayClass::weekday: return "weekday";
        case DayClass::weekend: return "weekend";
        case DayClass::all: return "all";
    }
    return "all";
}

DayClass day_class_from_name(const std::string& name) {
    if (name == "weekday") return DayClass::weekday;
    if (name == "weekend") return DayClass::weekend;
    if (name == "all") return DayClass::all;
    throw std::invalid_argument("unknown day class: " + name);
}

IndexRange work_hours_range(std::size_t period) {
    // 10:00 and 16:00 as sample indices of a day with `period` samples
    return IndexRange{period * 10 / 24, period * 16 / 24 - 1};
}

void validate(const TimeSeries& ts) {
    if (ts.values.empty()) throw std::invalid_argument("time series is empty");
    if (ts.interval_seconds <= 0) throw std::invalid_argument("interval must be positive");
    for (double v : ts.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("time series contains non-finite values");
    }
}

DemandPattern periodic_mean(const TimeSeries& ts, std::size_t period_samples) {
    validate(ts);
    if (period_samples == 0) throw std::invalid_argument("period must be positive");
    if (ts.values.size() < period_samples) {
        throw std::invalid_argument("insufficient data for one period");
    }
    const std::size_t n_periods = ts.values.size() / period_samples;

    DemandPattern pattern;
    pattern.values.assign(period_samples, 0.0);
    pattern.n_periods = static_cast<int>(n_periods);
    pattern.id = ts.id;
    for (std::size_t p = 0; p < n_periods; ++p) {
        const double* block = ts.values.data() + p * period_samples;
        for (std::size_t j = 0; j < period_samples; ++j) pattern.values[j] += block[j];
    }
    const double inv = 1.0 / static_cast<double>(n_periods);
    for (double& v : pattern.values) v *= inv;
    return pattern;
}

std::vector<double> moving_average(std::span<const double> values, std::size_t window,
                                   Boundary boundary) {
    const std::size_t n = values.size();
    if (window == 0) throw std::invalid_argument("window must be positive");
    if (window > n) throw std::invalid_argument("window exceeds series length");

    std::vector<double> out(n, 0.0);
    const std::ptrdiff_t left = static_cast<std::ptrdiff_t>(window / 2);
    const std::ptrdiff_t right = static_cast<std::ptrdiff_t>(window) - 1 - left;

    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        double acc = 0.0;
        std::size_t count = 0;
        for (std::ptrdiff_t off = -left; off <= right; ++off) {
            std::ptrdiff_t idx = i + off;
            if (boundary == Boundary::circular) {
                idx = (idx % static_cast<std::ptrdiff_t>(n) + static_cast<std::ptrdiff_t>(n)) %
                      static_cast<std::ptrdiff_t>(n);
            } else if (idx < 0 || idx >= static_cast<std::ptrdiff_t>(n)) {
                continue;
            }
            acc += values[static_cast<std::size_t>(idx)];
            ++count;
        }
        out[static_cast<std::size_t>(i)] = acc / static_cast<double>(count);
    }
    return out;
}

TimeSeries moving_average(const TimeSeries& ts, std::size_t window) {
    validate(ts);
    TimeSeries out = ts;
    out.values = moving_average(std::span<const double>(ts.values), window, Boundary::shrink);
    return out;
}

DemandPattern smooth(const DemandPattern& pattern, std::size_t window) {
    DemandPattern out = pattern;
    out.values = moving_average(std::span<const double>(pattern.values), window,
                                Boundary::circular);
    return out;
}

std::vector<double> min_max_normalize(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("cannot normalize an empty pattern");
    double mn = 0.0;
    double mx = 0.0;
    kernels::min_max(values.data(), values.size(), mn, mx);
    std::vector<double> out(values.size());
    if (mx == mn) {
        // constant pattern carries no shape: map to zero
        return out;
    }
    const double inv = 1.0 / (mx - mn);
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - mn) * inv;
    return out;
}

DemandPattern min_max_normalize(const DemandPattern& pattern) {
    DemandPattern out = pattern;
    out.values = min_max_normalize(std::span<const double>(pattern.values));
    out.normalized = true;
    return out;
}

FeatureVector work_hour_features(const DemandPattern& pattern, IndexRange window) {
    if (window.last < window.first || window.last >= pattern.values.size()) {
        throw std::invalid_argument("work-hour window out of range");
    }
    const std::size_t count = window.count();
    const double* data = pattern.values.data() + window.first;
    const double mean = kernels::sum(data, count) / static_cast<double>(count);
    double sq = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double d = data[i] - mean;
        sq += d * d;
    }
    return FeatureVector{mean, std::sqrt(sq / static_cast<double>(count))};
}

FeatureVector work_hour_features(const DemandPattern& pattern) {
    return work_hour_features(pattern, work_hours_range(pattern.values.size()));
}

std::vector<double> mean_of_days(const std::vector<std::span<const double>>& days) {
    if (days.empty()) throw std::invalid_argument("no days to average");
    const std::size_t period = days.front().size();
    std::vector<double> out(period, 0.0);
    for (const auto& day : days) {
        if (day.size() != period) throw std::invalid_argument("day slices differ in length");
        for (std::size_t j = 0; j < period; ++j) out[j] += day[j];
    }
    const double inv = 1.0 / static_cast<double>(days.size());
    for (double& v : out) v *= inv;
    return out;
}

}  // namespace aquaclust
