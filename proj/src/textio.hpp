#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lfa.hpp"
#include "multigrid.hpp"

namespace selseg {

/// One "x y" integer pixel pair per line; '#' starts a comment. Requires at
/// least three points.
MarkerSet load_markers(const std::string& path);

/// Line-oriented `key = value` report with JSON-compatible array values.
/// A solve writes cycles, energy_per_cycle, rel_change_per_cycle and
/// wall_time_seconds; a rate analysis writes mu_max, mu_avg, mu_max_D,
/// mu_avg_D and worst_pixels (rows [i, j, mu, A, B, C, D]).
std::string format_solve_report(const SolveStats& stats);
std::string format_lfa_report(const LfaReport& report);
void write_text_file(const std::string& path, const std::string& content);

/// Parsed report fields; absent keys stay empty.
struct ReportData {
    std::optional<int> cycles;
    std::vector<double> energy_per_cycle;
    std::vector<double> rel_change_per_cycle;
    std::optional<double> wall_time_seconds;
    std::optional<double> mu_max, mu_avg, mu_max_D, mu_avg_D;
    std::vector<WorstPixel> worst_pixels;
};

ReportData parse_report(const std::string& path);

} // namespace selseg
