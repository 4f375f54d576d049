#pragma once
// Per-model report files and cross-model leaderboards: raw metrics,
// min-max-normalized values, composite scores, and mean ranks.

#include <string>
#include <vector>

#include "graphsim/metrics_macro.hpp"
#include "graphsim/metrics_micro.hpp"

namespace graphsim {

void write_micro_report(const std::string& path, const MicroReport& report);
void write_macro_report(const std::string& path, const MacroReport& report);
MicroReport read_micro_report(const std::string& path);
MacroReport read_macro_report(const std::string& path);

// Reads every *.json report in the directory; files are micro or macro by a
// "kind" field. Missing directory or no reports is an error.
struct ReportSet {
    std::vector<MicroReport> micro;
    std::vector<MacroReport> macro;
};
ReportSet load_reports(const std::string& dir);

// Leaderboards are sorted by model name before scoring, so output is
// independent of input file order.
struct MicroLeaderboard {
    std::vector<MicroReport> reports;
    std::vector<TdggScores> scores;
    std::vector<double> ranks;
};
struct MacroLeaderboard {
    std::vector<MacroReport> reports;
    std::vector<IdggScores> scores;
    std::vector<double> ranks;
};

MicroLeaderboard build_micro_leaderboard(std::vector<MicroReport> reports);
MacroLeaderboard build_macro_leaderboard(std::vector<MacroReport> reports);

std::string render_micro_table(const MicroLeaderboard& board);
std::string render_macro_table(const MacroLeaderboard& board);

// Writes leaderboard.json plus micro/macro plain-text tables into out_dir.
void write_leaderboards(const std::string& out_dir, const ReportSet& reports);

}  // namespace graphsim
