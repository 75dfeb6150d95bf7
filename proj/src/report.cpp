#include "yfl/report.hpp"

#include <cstdio>
#include <sstream>

#include "yfl/field_io.hpp"

namespace yfl {

nlohmann::json to_json(const EstimateReport& r) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : r.parameters) params[k] = v;
    return {{"name", r.name},
            {"status", to_string(r.status)},
            {"holds", r.holds()},
            {"worst_margin", r.worst_margin},
            {"worst_time", r.worst_time},
            {"worst_excess", r.worst_excess},
            {"parameters", params},
            {"tolerances", {{"abs", r.tolerance.abs}, {"rel", r.tolerance.rel}}},
            {"notes", r.notes}};
}

std::string estimate_reports_json(const std::vector<EstimateReport>& reports, const std::string& config_hash) {
    nlohmann::json out;
    out["config_hash"] = config_hash;
    out["checks"] = nlohmann::json::array();
    for (const auto& r : reports) out["checks"].push_back(to_json(r));
    return out.dump(2) + "\n";
}

std::string estimate_reports_table(const std::vector<EstimateReport>& reports, const std::string& config_hash) {
    std::ostringstream os;
    os << "# config_hash=" << config_hash << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-20s %-18s %-14s %-12s\n", "check", "status", "worst_margin", "worst_time");
    os << line;
    for (const auto& r : reports) {
        std::snprintf(line, sizeof line, "%-20s %-18s %-14.6g %-12.6g\n", r.name.c_str(), to_string(r.status),
                      r.worst_margin, r.worst_time);
        os << line;
        for (const auto& n : r.notes) os << "    note: " << n << "\n";
    }
    return os.str();
}

}  // namespace yfl
