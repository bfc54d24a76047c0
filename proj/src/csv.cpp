// Copyright 2026 aquaclust authors
// SPDX-License-Identifier: Apache-2.0

#include "aquaclust/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

namespace aquaclust::io {

// --- calendar ----------------------------------------------------------------

std::int64_t days_from_civil(int year, unsigned month, unsigned day) {
    year -= month <= 2;
    const std::int64_t era = (year >= 0 ? year : year - 399) / 400;
    const auto yoe = static_cast<unsigned>(year - era * 400);                         // [0, 399]
    const unsigned doy = (153 * (month + (month > 2 ? -3 : 9)) + 2) / 5 + day - 1;    // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;                       // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t days, int& year, unsigned& month, unsigned& day) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const auto doe = static_cast<unsigned>(days - era * 146097);                      // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;       // [0, 399]
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);                     // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                                          // [0, 11]
    day = doy - (153 * mp + 2) / 5 + 1;
    month = mp + (mp < 10 ? 3 : -9);
    year = static_cast<int>(y + (month <= 2));
}

namespace {

bool parse_fixed_uint(std::string_view text, std::size_t pos, std::size_t digits, unsigned& out) {
    if (pos + digits > text.size()) return false;
    unsigned value = 0;
    for (std::size_t i = 0; i < digits; ++i) {
        const char c = text[pos + i];
        if (c < '0' || c > '9') return false;
        value = value * 10 + static_cast<unsigned>(c - '0');
    }
    out = value;
    return true;
}

}  // namespace

bool parse_rfc3339(std::string_view text, std::int64_t& epoch_seconds) {
    // YYYY-MM-DDThh:mm:ss[.frac](Z|+hh:mm|-hh:mm)
    unsigned year = 0;
    unsigned month = 0;
    unsigned day = 0;
    unsigned hour = 0;
    unsigned minute = 0;
    unsigned second = 0;
    if (!parse_fixed_uint(text, 0, 4, year) || text.size() < 20) return false;
    if (text[4] != '-' || !parse_fixed_uint(text, 5, 2, month)) return false;
    if (text[7] != '-' || !parse_fixed_uint(text, 8, 2, day)) return false;
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') return false;
    if (!parse_fixed_uint(text, 11, 2, hour) || text[13] != ':') return false;
    if (!parse_fixed_uint(text, 14, 2, minute) || text[16] != ':') return false;
    if (!parse_fixed_uint(text, 17, 2, second)) return false;
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        return false;

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {  // ignore fractional seconds
        ++pos;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    }
    if (pos >= text.size()) return false;

    std::int64_t offset = 0;
    const char z = text[pos];
    if (z == 'Z' || z == 'z') {
        if (pos + 1 != text.size()) return false;
    } else if (z == '+' || z == '-') {
        unsigned oh = 0;
        unsigned om = 0;
        if (!parse_fixed_uint(text, pos + 1, 2, oh)) return false;
        if (pos + 3 >= text.size() || text[pos + 3] != ':') return false;
        if (!parse_fixed_uint(text, pos + 4, 2, om)) return false;
        if (pos + 6 != text.size()) return false;
        offset = static_cast<std::int64_t>(oh) * 3600 + static_cast<std::int64_t>(om) * 60;
        if (z == '-') offset = -offset;
    } else {
        return false;
    }

    epoch_seconds = days_from_civil(static_cast<int>(year), month, day) * 86400 +
                    static_cast<std::int64_t>(hour) * 3600 +
                    static_cast<std::int64_t>(minute) * 60 + second - offset;
    return true;
}

std::string format_rfc3339(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int year = 0;
    unsigned month = 0;
    unsigned day = 0;
    civil_from_days(days, year, month, day);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", year, month, day,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

int weekday_of(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    if (epoch_seconds % 86400 < 0) --days;
    return static_cast<int>(((days % 7) + 7 + 4) % 7);  // day 0 was a Thursday
}

bool is_weekend_day(std::int64_t epoch_seconds) {
    const int wd = weekday_of(epoch_seconds);
    return wd == 0 || wd == 6;
}

// --- formatting ----------------------------------------------------------------

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DataError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw DataError("failed writing " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

bool parse_double(std::string_view text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

std::string read_whole_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Calls fn(line_number, line) for every non-empty line after the header;
// verifies the header matches exactly.
template <typename Fn>
void for_each_row(const std::filesystem::path& path, std::string_view expected_header, Fn&& fn) {
    const std::string content = read_whole_file(path);
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (pos <= content.size()) {
        std::size_t end = content.find('\n', pos);
        if (end == std::string::npos) end = content.size();
        std::string_view line(content.data() + pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        if (!line.empty()) {
            if (!saw_header) {
                if (line != expected_header) {
                    throw DataError(path.string() + ": expected header '" +
                                    std::string(expected_header) + "', got '" + std::string(line) +
                                    "'");
                }
                saw_header = true;
            } else {
                fn(line_no, line);
            }
        }
        if (end == content.size()) break;
        pos = end + 1;
    }
    if (!saw_header) throw DataError(path.string() + ": empty file");
}

[[noreturn]] void throw_bad_lines(const std::filesystem::path& path,
                                  const std::vector<std::size_t>& lines) {
    std::string msg = path.string() + ": unparseable rows at line";
    msg += lines.size() > 1 ? "s " : " ";
    for (std::size_t i = 0; i < lines.size() && i < 10; ++i) {
        if (i) msg += ", ";
        msg += std::to_string(lines[i]);
    }
    if (lines.size() > 10) msg += ", ...";
    throw DataError(msg);
}

}  // namespace

// --- raw meter CSV -------------------------------------------------------------

std::vector<RawRecord> read_raw_csv(const std::filesystem::path& path) {
    std::vector<RawRecord> records;
    std::vector<std::size_t> bad_lines;
    for_each_row(path, "timestamp,meter_id,volume_liters", [&](std::size_t line_no,
                                                               std::string_view line) {
        const auto fields = split_csv_line(line);
        RawRecord rec;
        if (fields.size() != 3 || !parse_rfc3339(fields[0], rec.epoch_seconds) ||
            fields[1].empty() || !parse_double(fields[2], rec.volume_liters)) {
            bad_lines.push_back(line_no);
            return;
        }
        rec.meter_id = std::string(fields[1]);
        records.push_back(std::move(rec));
    });
    if (!bad_lines.empty()) throw_bad_lines(path, bad_lines);
    return records;
}

void write_raw_csv(const std::filesystem::path& path, const std::vector<TimeSeries>& series) {
    std::string out = "timestamp,meter_id,volume_liters\n";
    for (const auto& ts : series) {
        const std::int64_t start = ts.start_epoch_seconds.value_or(0);
        for (std::size_t i = 0; i < ts.values.size(); ++i) {
            out += format_rfc3339(start + static_cast<std::int64_t>(i) * ts.interval_seconds);
            out += ',';
            out += ts.id;
            out += ',';
            out += format_double(ts.values[i]);
            out += '\n';
        }
    }
    write_file_atomic(path, out);
}

std::vector<TimeSeries> resample(const std::vector<RawRecord>& records,
                                 std::int64_t bin_seconds) {
    if (bin_seconds <= 0) throw DataError("bin size must be positive");

    std::unordered_map<std::string, std::size_t> index;
    std::vector<std::vector<const RawRecord*>> per_meter;
    std::vector<std::string> order;
    for (const auto& rec : records) {
        auto [it, inserted] = index.try_emplace(rec.meter_id, per_meter.size());
        if (inserted) {
            per_meter.emplace_back();
            order.push_back(rec.meter_id);
        }
        auto& bucket = per_meter[it->second];
        if (!bucket.empty() && rec.epoch_seconds < bucket.back()->epoch_seconds) {
            throw DataError("timestamps not monotone for meter " + rec.meter_id);
        }
        bucket.push_back(&rec);
    }

    std::vector<TimeSeries> out;
    out.reserve(per_meter.size());
    for (std::size_t m = 0; m < per_meter.size(); ++m) {
        const auto& bucket = per_meter[m];
        const std::int64_t first_bin = bucket.front()->epoch_seconds / bin_seconds -
                                       (bucket.front()->epoch_seconds % bin_seconds < 0 ? 1 : 0);
        const std::int64_t last_bin = bucket.back()->epoch_seconds / bin_seconds -
                                      (bucket.back()->epoch_seconds % bin_seconds < 0 ? 1 : 0);
        TimeSeries ts;
        ts.id = order[m];
        ts.interval_seconds = bin_seconds;
        ts.start_epoch_seconds = first_bin * bin_seconds;
        ts.values.assign(static_cast<std::size_t>(last_bin - first_bin + 1), 0.0);
        for (const RawRecord* rec : bucket) {
            const std::int64_t bin = rec->epoch_seconds / bin_seconds -
                                     (rec->epoch_seconds % bin_seconds < 0 ? 1 : 0);
            ts.values[static_cast<std::size_t>(bin - first_bin)] += rec->volume_liters;
        }
        out.push_back(std::move(ts));
    }
    return out;
}

// --- patterns CSV ----------------------------------------------------------------

namespace {

std::string patterns_header(std::size_t period) {
    std::string header = "meter_id,day_class";
    char buf[32];
    for (std::size_t j = 0; j < period; ++j) {
        std::snprintf(buf, sizeof(buf), ",v%02zu", j);
        header += buf;
    }
    return header;
}

}  // namespace

void write_patterns_csv(const std::filesystem::path& path,
                        const std::vector<DemandPattern>& patterns) {
    if (patterns.empty()) throw DataError("no patterns to write");
    const std::size_t period = patterns.front().period();
    std::string out = patterns_header(period) + "\n";
    for (const auto& p : patterns) {
        if (p.period() != period) throw DataError("patterns differ in length");
        out += p.id;
        out += ',';
        out += day_class_name(p.day_class);
        for (double v : p.values) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<DemandPattern> read_patterns_csv(const std::filesystem::path& path) {
    const std::string content = read_whole_file(path);
    const std::size_t header_end = content.find('\n');
    if (header_end == std::string::npos) throw DataError(path.string() + ": empty file");
    std::string_view header(content.data(), header_end);
    if (!header.empty() && header.back() == '\r') header.remove_suffix(1);
    const auto header_fields = split_csv_line(header);
    if (header_fields.size() < 3 || header_fields[0] != "meter_id" ||
        header_fields[1] != "day_class") {
        throw DataError(path.string() + ": unexpected patterns header");
    }
    const std::size_t period = header_fields.size() - 2;

    std::vector<DemandPattern> patterns;
    std::vector<std::size_t> bad_lines;
    for_each_row(path, std::string_view(header), [&](std::size_t line_no, std::string_view line) {
        const auto fields = split_csv_line(line);
        if (fields.size() != period + 2 || fields[0].empty()) {
            bad_lines.push_back(line_no);
            return;
        }
        DemandPattern p;
        p.id = std::string(fields[0]);
        try {
            p.day_class = day_class_from_name(std::string(fields[1]));
        } catch (const std::invalid_argument&) {
            bad_lines.push_back(line_no);
            return;
        }
        p.values.resize(period);
        for (std::size_t j = 0; j < period; ++j) {
            if (!parse_double(fields[j + 2], p.values[j])) {
                bad_lines.push_back(line_no);
                return;
            }
        }
        patterns.push_back(std::move(p));
    });
    if (!bad_lines.empty()) throw_bad_lines(path, bad_lines);
    return patterns;
}

// --- clustering artifacts --------------------------------------------------------

void write_assignments_csv(const std::filesystem::path& path,
                           const std::vector<AssignmentRow>& rows) {
    std::string out = "meter_id,day_class,cluster\n";
    for (const auto& r : rows) {
        out += r.meter_id;
        out += ',';
        out += day_class_name(r.day_class);
        out += ',';
        out += std::to_string(r.cluster);
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::vector<AssignmentRow> read_assignments_csv(const std::filesystem::path& path) {
    std::vector<AssignmentRow> rows;
    std::vector<std::size_t> bad_lines;
    for_each_row(path, "meter_id,day_class,cluster", [&](std::size_t line_no,
                                                         std::string_view line) {
        const auto fields = split_csv_line(line);
        if (fields.size() != 3 || fields[0].empty()) {
            bad_lines.push_back(line_no);
            return;
        }
        AssignmentRow row;
        row.meter_id = std::string(fields[0]);
        double cluster = 0.0;
        try {
            row.day_class = day_class_from_name(std::string(fields[1]));
        } catch (const std::invalid_argument&) {
            bad_lines.push_back(line_no);
            return;
        }
        if (!parse_double(fields[2], cluster) || cluster < 0) {
            bad_lines.push_back(line_no);
            return;
        }
        row.cluster = static_cast<int>(cluster);
        rows.push_back(std::move(row));
    });
    if (!bad_lines.empty()) throw_bad_lines(path, bad_lines);
    return rows;
}

void write_centers_csv(const std::filesystem::path& path, const std::vector<CenterRow>& rows,
                       bool feature_space) {
    if (rows.empty()) throw DataError("no centers to write");
    std::string out;
    if (feature_space) {
        out = "cluster,kind,mean_workhours,std_workhours\n";
    } else {
        std::string header = "cluster,kind";
        char buf[32];
        for (std::size_t j = 0; j < rows.front().values.size(); ++j) {
            std::snprintf(buf, sizeof(buf), ",v%02zu", j);
            header += buf;
        }
        out = header + "\n";
    }
    for (const auto& r : rows) {
        out += std::to_string(r.cluster);
        out += ',';
        out += r.kind;
        for (double v : r.values) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_file_atomic(path, out);
}

void write_truth_csv(const std::filesystem::path& path, const std::vector<std::string>& ids,
                     const std::vector<std::string>& labels) {
    std::string out = "meter_id,label\n";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        out += ids[i];
        out += ',';
        out += labels[i];
        out += '\n';
    }
    write_file_atomic(path, out);
}

std::map<std::string, std::string> read_truth_csv(const std::filesystem::path& path) {
    std::map<std::string, std::string> truth;
    std::vector<std::size_t> bad_lines;
    for_each_row(path, "meter_id,label", [&](std::size_t line_no, std::string_view line) {
        const auto fields = split_csv_line(line);
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
            bad_lines.push_back(line_no);
            return;
        }
        truth[std::string(fields[0])] = std::string(fields[1]);
    });
    if (!bad_lines.empty()) throw_bad_lines(path, bad_lines);
    return truth;
}

void write_analysis_csv(const std::filesystem::path& path,
                        const std::vector<AnalysisRowOut>& rows) {
    std::string out = "k,mean_silhouette,objective\n";
    for (const auto& r : rows) {
        out += std::to_string(r.k);
        out += ',';
        out += format_double(r.mean_silhouette);
        out += ',';
        out += format_double(r.objective);
        out += '\n';
    }
    write_file_atomic(path, out);
}

namespace {

std::string silhouette_rows_to_csv(const std::vector<SilhouetteRowOut>& rows) {
    std::string out = "meter_id,day_class,cluster,silhouette\n";
    for (const auto& r : rows) {
        out += r.meter_id;
        out += ',';
        out += day_class_name(r.day_class);
        out += ',';
        out += std::to_string(r.cluster);
        out += ',';
        out += format_double(r.value);
        out += '\n';
    }
    return out;
}

}  // namespace

void write_silhouette_csv(const std::filesystem::path& path,
                          const std::vector<SilhouetteRowOut>& rows) {
    write_file_atomic(path, silhouette_rows_to_csv(rows));
}

void write_outliers_csv(const std::filesystem::path& path,
                        const std::vector<SilhouetteRowOut>& rows) {
    write_file_atomic(path, silhouette_rows_to_csv(rows));
}

}  // namespace aquaclust::io
