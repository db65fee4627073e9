#include "textio.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace selseg {

MarkerSet load_markers(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, path + ": cannot open for reading");
    MarkerSet markers;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double x, y;
        if (!(ls >> x)) continue; // blank or comment-only line
        if (!(ls >> y))
            throw Error(ErrorCode::Param,
                        path + ":" + std::to_string(lineno) + ": expected 'x y' pair");
        std::string extra;
        if (ls >> extra)
            throw Error(ErrorCode::Param, path + ":" + std::to_string(lineno) +
                                              ": trailing content '" + extra + "'");
        markers.points.emplace_back(x, y);
    }
    if (markers.points.size() < 3)
        throw Error(ErrorCode::Param, path + ": k >= 3 markers required, got " +
                                          std::to_string(markers.points.size()));
    return markers;
}

namespace {

std::string format_number(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

std::string format_array(const std::vector<double>& xs) {
    std::string out = "[";
    for (size_t k = 0; k < xs.size(); ++k) {
        if (k) out += ", ";
        out += format_number(xs[k]);
    }
    return out + "]";
}

} // namespace

std::string format_solve_report(const SolveStats& stats) {
    std::ostringstream os;
    os << "cycles = " << stats.cycles_run << "\n";
    os << "energy_per_cycle = " << format_array(stats.energy_per_cycle) << "\n";
    os << "rel_change_per_cycle = " << format_array(stats.rel_change_per_cycle) << "\n";
    os << "wall_time_seconds = " << format_number(stats.wall_time_total) << "\n";
    return os.str();
}

std::string format_lfa_report(const LfaReport& report) {
    std::ostringstream os;
    os << "mu_max = " << format_number(report.mu_max) << "\n";
    os << "mu_avg = " << format_number(report.mu_avg) << "\n";
    os << "mu_max_D = " << format_number(report.mu_max_D) << "\n";
    os << "mu_avg_D = " << format_number(report.mu_avg_D) << "\n";
    os << "worst_pixels = [";
    for (size_t k = 0; k < report.worst.size(); ++k) {
        const WorstPixel& w = report.worst[k];
        if (k) os << ", ";
        os << "[" << w.i << ", " << w.j << ", " << format_number(w.mu) << ", "
           << format_number(w.a) << ", " << format_number(w.b) << ", " << format_number(w.c)
           << ", " << format_number(w.d) << "]";
    }
    os << "]\n";
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, path + ": cannot open for writing");
    out << content;
    if (!out) throw Error(ErrorCode::Io, path + ": write failed");
}

ReportData parse_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, path + ": cannot open for reading");
    ReportData data;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const size_t eq = line.find(" = ");
        if (eq == std::string::npos)
            throw Error(ErrorCode::Format,
                        path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        nlohmann::json v;
        try {
            v = nlohmann::json::parse(value);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::Format,
                        path + ":" + std::to_string(lineno) + ": bad value: " + e.what());
        }
        if (key == "cycles") {
            data.cycles = v.get<int>();
        } else if (key == "energy_per_cycle") {
            data.energy_per_cycle = v.get<std::vector<double>>();
        } else if (key == "rel_change_per_cycle") {
            data.rel_change_per_cycle = v.get<std::vector<double>>();
        } else if (key == "wall_time_seconds") {
            data.wall_time_seconds = v.get<double>();
        } else if (key == "mu_max") {
            data.mu_max = v.get<double>();
        } else if (key == "mu_avg") {
            data.mu_avg = v.get<double>();
        } else if (key == "mu_max_D") {
            data.mu_max_D = v.get<double>();
        } else if (key == "mu_avg_D") {
            data.mu_avg_D = v.get<double>();
        } else if (key == "worst_pixels") {
            for (const auto& row : v) {
                WorstPixel w;
                w.i = row.at(0).get<int>();
                w.j = row.at(1).get<int>();
                w.mu = row.at(2).get<double>();
                w.a = row.at(3).get<double>();
                w.b = row.at(4).get<double>();
                w.c = row.at(5).get<double>();
                w.d = row.at(6).get<double>();
                data.worst_pixels.push_back(w);
            }
        } else {
            throw Error(ErrorCode::Format,
                        path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
    }
    return data;
}

} // namespace selseg
