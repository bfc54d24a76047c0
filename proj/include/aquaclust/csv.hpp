// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aquaclust/time_series.hpp"

namespace aquaclust::io {

// Malformed or inconsistent input data (CLI exit code 2).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- calendar ----------------------------------------------------------------

// Days since 1970-01-01 for a proleptic Gregorian date.
std::int64_t days_from_civil(int year, unsigned month, unsigned day);
void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day);

// RFC 3339 timestamp, e.g. 2023-01-02T06:30:00Z or with a numeric offset.
bool parse_rfc3339(std::string_view text, std::int64_t& epoch_seconds);
std::string format_rfc3339(std::int64_t epoch_seconds);

int weekday_of(std::int64_t epoch_seconds);  // 0 = Sunday .. 6 = Saturday
bool is_weekend_day(std::int64_t epoch_seconds);

// --- formatting ----------------------------------------------------------------

// 17 significant digits; round-trips binary64 exactly.
std::string format_double(double v);

// Writes to a temporary file in the target directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// --- raw meter CSV (long format: timestamp,meter_id,volume_liters) ------------

struct RawRecord {
    std::int64_t epoch_seconds = 0;
    std::string meter_id;
    double volume_liters = 0.0;
};

std::vector<RawRecord> read_raw_csv(const std::filesystem::path& path);
void write_raw_csv(const std::filesystem::path& path, const std::vector<TimeSeries>& series);

// Sums volumes into fixed bins per meter (volume is extensive). Bins between
// a meter's first and last reading are zero-filled. Meters keep their order
// of first appearance.
std::vector<TimeSeries> resample(const std::vector<RawRecord>& records,
                                 std::int64_t bin_seconds);

// --- patterns CSV (wide format: meter_id,day_class,v00..) ---------------------

void write_patterns_csv(const std::filesystem::path& path,
                        const std::vector<DemandPattern>& patterns);
std::vector<DemandPattern> read_patterns_csv(const std::filesystem::path& path);

// --- clustering artifacts ------------------------------------------------------

struct AssignmentRow {
    std::string meter_id;
    DayClass day_class = DayClass::all;
    int cluster = 0;
};

void write_assignments_csv(const std::filesystem::path& path,
                           const std::vector<AssignmentRow>& rows);
std::vector<AssignmentRow> read_assignments_csv(const std::filesystem::path& path);

struct CenterRow {
    int cluster = 0;
    std::string kind;  // "barycenter", "mean", or "feature"
    std::vector<double> values;
};

// feature_space selects the two-column feature header instead of v00..
void write_centers_csv(const std::filesystem::path& path, const std::vector<CenterRow>& rows,
                       bool feature_space);

void write_truth_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                     const std::vector<std::string>& labels);
std::map<std::string, std::string> read_truth_csv(const std::filesystem::path& path);

struct AnalysisRowOut {
    int k = 0;
    double mean_silhouette = 0.0;
    double objective = 0.0;
};
void write_analysis_csv(const std::filesystem::path& path,
                        const std::vector<AnalysisRowOut>& rows);

struct SilhouetteRowOut {
    std::string meter_id;
    DayClass day_class = DayClass::all;
    int cluster = 0;
    double value = 0.0;
};
void write_silhouette_csv(const std::filesystem::path& path,
                          const std::vector<SilhouetteRowOut>& rows);
void write_outliers_csv(const std::filesystem::path& path,
                        const std::vector<SilhouetteRowOut>& rows);

}  // namespace aquaclust::io
