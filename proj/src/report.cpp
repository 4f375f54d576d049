#include "graphsim/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace graphsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json micro_to_json(const MicroReport& r) {
    return {{"kind", "micro"},
            {"model", r.model},
            {"r100_easy", r.r100_easy},
            {"r100_hard", r.r100_hard},
            {"r100_all", r.r100_all},
            {"h100_easy", r.h100_easy},
            {"h100_hard", r.h100_hard},
            {"h100_all", r.h100_all},
            {"acc", r.acc},
            {"rouge", r.rouge},
            {"f1", r.f1}};
}

MicroReport micro_from_json(const json& j) {
    MicroReport r;
    r.model = j.at("model").get<std::string>();
    r.r100_easy = j.at("r100_easy").get<double>();
    r.r100_hard = j.at("r100_hard").get<double>();
    r.r100_all = j.at("r100_all").get<double>();
    r.h100_easy = j.value("h100_easy", 0.0);
    r.h100_hard = j.value("h100_hard", 0.0);
    r.h100_all = j.value("h100_all", 0.0);
    r.acc = j.at("acc").get<double>();
    r.rouge = j.at("rouge").get<double>();
    r.f1 = j.at("f1").get<double>();
    return r;
}

json macro_to_json(const MacroReport& r) {
    return {{"kind", "macro"},
            {"model", r.model},
            {"mmd_degree", r.mmd_degree},
            {"mmd_clustering", r.mmd_clustering},
            {"mmd_spectral", r.mmd_spectral},
            {"eo", r.eo},
            {"p100_kol", r.p100_kol},
            {"delta_chambers", r.delta_chambers},
            {"delta_alpha", r.delta_alpha}};
}

MacroReport macro_from_json(const json& j) {
    MacroReport r;
    r.model = j.at("model").get<std::string>();
    r.mmd_degree = j.at("mmd_degree").get<double>();
    r.mmd_clustering = j.at("mmd_clustering").get<double>();
    r.mmd_spectral = j.at("mmd_spectral").get<double>();
    r.eo = j.at("eo").get<double>();
    r.p100_kol = j.at("p100_kol").get<double>();
    r.delta_chambers = j.at("delta_chambers").get<double>();
    r.delta_alpha = j.at("delta_alpha").get<double>();
    return r;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw GraphError("cannot write report: " + path);
    f << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw GraphError("cannot open report: " + path);
    json j;
    f >> j;
    return j;
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(4) << x;
    return os.str();
}

std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> widths(header.size());
    for (size_t c = 0; c < header.size(); ++c) widths[c] = header[c].size();
    for (const auto& row : rows)
        for (size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (size_t c = 0; c < cells.size(); ++c)
            os << (c ? "  " : "") << std::left << std::setw(static_cast<int>(widths[c]))
               << cells[c];
        os << "\n";
    };
    line(header);
    size_t total = header.size() - 1;
    for (size_t w : widths) total += w + 1;
    os << std::string(total, '-') << "\n";
    for (const auto& row : rows) line(row);
    return os.str();
}

}  // namespace

void write_micro_report(const std::string& path, const MicroReport& report) {
    write_json(path, micro_to_json(report));
}

void write_macro_report(const std::string& path, const MacroReport& report) {
    write_json(path, macro_to_json(report));
}

MicroReport read_micro_report(const std::string& path) { return micro_from_json(read_json(path)); }
MacroReport read_macro_report(const std::string& path) { return macro_from_json(read_json(path)); }

ReportSet load_reports(const std::string& dir) {
    if (!fs::is_directory(dir)) throw GraphError("report directory not found: " + dir);
    ReportSet set;
    std::vector<std::string> paths;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            paths.push_back(entry.path().string());
    std::sort(paths.begin(), paths.end());
    for (const std::string& p : paths) {
        json j = read_json(p);
        std::string kind = j.value("kind", "");
        if (kind == "micro")
            set.micro.push_back(micro_from_json(j));
        else if (kind == "macro")
            set.macro.push_back(macro_from_json(j));
        else
            throw GraphError("report missing kind field: " + p);
    }
    if (set.micro.empty() && set.macro.empty())
        throw GraphError("no model reports in " + dir);
    return set;
}

MicroLeaderboard build_micro_leaderboard(std::vector<MicroReport> reports) {
    if (reports.empty()) throw GraphError("micro leaderboard: no reports");
    std::sort(reports.begin(), reports.end(),
              [](const MicroReport& a, const MicroReport& b) { return a.model < b.model; });
    MicroLeaderboard board;
    board.scores = compose_tdgg(reports);
    auto col = [&](double MicroReport::* f) {
        std::vector<double> v;
        for (const MicroReport& r : reports) v.push_back(r.*f);
        return v;
    };
    board.ranks = mean_ranks(
        {col(&MicroReport::r100_easy), col(&MicroReport::r100_hard), col(&MicroReport::r100_all),
         col(&MicroReport::h100_easy), col(&MicroReport::h100_hard), col(&MicroReport::h100_all),
         col(&MicroReport::acc), col(&MicroReport::rouge), col(&MicroReport::f1)},
        std::vector<Direction>(9, Direction::higher_better));
    board.reports = std::move(reports);
    return board;
}

MacroLeaderboard build_macro_leaderboard(std::vector<MacroReport> reports) {
    if (reports.empty()) throw GraphError("macro leaderboard: no reports");
    std::sort(reports.begin(), reports.end(),
              [](const MacroReport& a, const MacroReport& b) { return a.model < b.model; });
    MacroLeaderboard board;
    board.scores = compose_idgg(reports);
    auto col = [&](double MacroReport::* f) {
        std::vector<double> v;
        for (const MacroReport& r : reports) v.push_back(r.*f);
        return v;
    };
    board.ranks = mean_ranks(
        {col(&MacroReport::mmd_degree), col(&MacroReport::mmd_clustering),
         col(&MacroReport::mmd_spectral), col(&MacroReport::eo), col(&MacroReport::p100_kol),
         col(&MacroReport::delta_chambers), col(&MacroReport::delta_alpha)},
        {Direction::lower_better, Direction::lower_better, Direction::lower_better,
         Direction::higher_better, Direction::higher_better, Direction::lower_better,
         Direction::lower_better});
    board.reports = std::move(reports);
    return board;
}

std::string render_micro_table(const MicroLeaderboard& board) {
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < board.reports.size(); ++i) {
        const MicroReport& r = board.reports[i];
        rows.push_back({r.model, fmt(r.r100_easy), fmt(r.r100_hard), fmt(r.r100_all),
                        fmt(r.h100_easy), fmt(r.h100_hard), fmt(r.h100_all), fmt(r.acc),
                        fmt(r.rouge), fmt(r.f1), fmt(board.scores[i].s_sel),
                        fmt(board.scores[i].s_edge), fmt(board.scores[i].s_tdgg),
                        fmt(board.ranks[i])});
    }
    return render_table({"Model", "R@100-E", "R@100-H", "R@100", "H@100-E", "H@100-H", "H@100",
                         "ACC", "ROUGE-L", "F1", "S_sel", "S_edge", "S_TDGG", "Rank"},
                        rows);
}

std::string render_macro_table(const MacroLeaderboard& board) {
    std::vector<std::vector<std::string>> rows;
    for (size_t i = 0; i < board.reports.size(); ++i) {
        const MacroReport& r = board.reports[i];
        rows.push_back({r.model, fmt(r.mmd_degree), fmt(r.mmd_clustering), fmt(r.mmd_spectral),
                        fmt(r.eo), fmt(r.p100_kol), fmt(r.delta_chambers), fmt(r.delta_alpha),
                        fmt(board.scores[i].s_structure), fmt(board.scores[i].s_phenomenon),
                        fmt(board.scores[i].s_idgg), fmt(board.ranks[i])});
    }
    return render_table({"Model", "MMD-Deg", "MMD-Clus", "MMD-Spec", "EO", "P@100-KOL", "dC",
                         "dAlpha", "S_struct", "S_phenom", "S_IDGG", "Rank"},
                        rows);
}

void write_leaderboards(const std::string& out_dir, const ReportSet& reports) {
    fs::create_directories(out_dir);
    json out;
    if (!reports.micro.empty()) {
        MicroLeaderboard board = build_micro_leaderboard(reports.micro);
        std::ofstream tf(out_dir + "/leaderboard_micro.txt");
        tf << render_micro_table(board);
        json arr = json::array();
        for (size_t i = 0; i < board.reports.size(); ++i) {
            json j = micro_to_json(board.reports[i]);
            j["s_sel"] = board.scores[i].s_sel;
            j["s_edge"] = board.scores[i].s_edge;
            j["s_tdgg"] = board.scores[i].s_tdgg;
            j["rank"] = board.ranks[i];
            arr.push_back(j);
        }
        out["micro"] = arr;
    }
    if (!reports.macro.empty()) {
        MacroLeaderboard board = build_macro_leaderboard(reports.macro);
        std::ofstream tf(out_dir + "/leaderboard_macro.txt");
        tf << render_macro_table(board);
        json arr = json::array();
        for (size_t i = 0; i < board.reports.size(); ++i) {
            json j = macro_to_json(board.reports[i]);
            j["s_structure"] = board.scores[i].s_structure;
            j["s_phenomenon"] = board.scores[i].s_phenomenon;
            j["s_idgg"] = board.scores[i].s_idgg;
            j["rank"] = board.ranks[i];
            arr.push_back(j);
        }
        out["macro"] = arr;
    }
    write_json(out_dir + "/leaderboard.json", out);
}

}  // namespace graphsim
