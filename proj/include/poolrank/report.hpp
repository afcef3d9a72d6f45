#pragma once

#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "poolrank/eval.hpp"

namespace poolrank {

namespace detail {

inline std::string format_sig(double v, int significant_digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, v);
    return buf;
}

/// Full-precision double, round-trippable.
inline std::string format_full(double v) { return format_sig(v, 17); }

inline std::string pad_left(const std::string& s, std::size_t width) {
    if (s.size() >= width) return s;
    return std::string(width - s.size(), ' ') + s;
}

}  // namespace detail

/// Columns in the usual reporting order. Values are printed to 6 significant
/// digits; use the CSV writers when full precision matters.
inline std::string format_report_table(const EvalReport& report) {
    static constexpr std::size_t kWidth = 10;
    const std::size_t ranks[] = {1, 5, 10, 20};
    std::string header;
    std::string row;
    for (std::size_t r : ranks) {
        header += detail::pad_left("Rank-" + std::to_string(r), kWidth);
        row += detail::pad_left(detail::format_sig(report.cmc_at(r), 6), kWidth);
    }
    header += detail::pad_left("mAP", kWidth);
    row += detail::pad_left(detail::format_sig(report.map_score, 6), kWidth);

    std::ostringstream os;
    os << header << "\n" << row << "\n";
    os << "queries evaluated: " << report.queries_evaluated
       << ", excluded (no relevant entries): " << report.queries_excluded
       << ", wall time: " << detail::format_sig(report.wall_time_seconds, 6) << " s\n";
    if (!report.config_echo.empty()) {
        os << "config: " << report.config_echo << "\n";
    }
    return os.str();
}

/// Machine-readable form: one tab-separated record per metric, full
/// precision. Rank-independent metrics carry "-" in the rank column.
inline std::string format_report_records(const EvalReport& report) {
    std::ostringstream os;
    for (std::size_t r = 0; r < report.cmc.size(); ++r) {
        os << "cmc\t" << (r + 1) << "\t" << detail::format_full(report.cmc[r]) << "\n";
    }
    os << "map\t-\t" << detail::format_full(report.map_score) << "\n";
    os << "queries_evaluated\t-\t" << report.queries_evaluated << "\n";
    os << "queries_excluded\t-\t" << report.queries_excluded << "\n";
    os << "wall_time_seconds\t-\t" << detail::format_full(report.wall_time_seconds) << "\n";
    if (!report.config_echo.empty()) {
        os << "config\t-\t" << report.config_echo << "\n";
    }
    return os.str();
}

inline std::string format_cmc_csv(const EvalReport& report) {
    std::string out = "rank,accuracy\n";
    for (std::size_t r = 0; r < report.cmc.size(); ++r) {
        out += std::to_string(r + 1) + "," + detail::format_full(report.cmc[r]) + "\n";
    }
    return out;
}

inline std::string format_sweep_csv(SweepAxis axis, std::span<const SweepPoint> points) {
    std::string out = std::string(to_string(axis)) +
                      ",rank1,rank5,rank10,rank20,map,queries_evaluated,queries_excluded,"
                      "wall_time_seconds,diagnostic\n";
    for (const SweepPoint& p : points) {
        out += detail::format_full(p.value);
        if (p.report.has_value()) {
            const EvalReport& r = *p.report;
            for (std::size_t rank : {std::size_t{1}, std::size_t{5}, std::size_t{10},
                                     std::size_t{20}}) {
                out += "," + detail::format_full(r.cmc_at(rank));
            }
            out += "," + detail::format_full(r.map_score);
            out += "," + std::to_string(r.queries_evaluated);
            out += "," + std::to_string(r.queries_excluded);
            out += "," + detail::format_full(r.wall_time_seconds);
            out += ",";
        } else {
            out += ",,,,,,,," + p.diagnostic;
        }
        out += "\n";
    }
    return out;
}

inline std::string format_sweep_table(SweepAxis axis, std::span<const SweepPoint> points) {
    static constexpr std::size_t kWidth = 10;
    std::ostringstream os;
    os << detail::pad_left(to_string(axis), kWidth);
    for (std::size_t r : {1, 5, 10, 20}) {
        os << detail::pad_left("Rank-" + std::to_string(r), kWidth);
    }
    os << detail::pad_left("mAP", kWidth) << detail::pad_left("time(s)", kWidth + 4) << "\n";
    for (const SweepPoint& p : points) {
        os << detail::pad_left(detail::format_sig(p.value, 6), kWidth);
        if (p.report.has_value()) {
            const EvalReport& r = *p.report;
            for (std::size_t rank : {std::size_t{1}, std::size_t{5}, std::size_t{10},
                                     std::size_t{20}}) {
                os << detail::pad_left(detail::format_sig(r.cmc_at(rank), 6), kWidth);
            }
            os << detail::pad_left(detail::format_sig(r.map_score, 6), kWidth)
               << detail::pad_left(detail::format_sig(r.wall_time_seconds, 6), kWidth + 4);
        } else {
            os << "  skipped: " << p.diagnostic;
        }
        os << "\n";
    }
    return os.str();
}

}  // namespace poolrank
