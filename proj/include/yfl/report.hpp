#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "yfl/estimates.hpp"

namespace yfl {

/// {name, status, holds, worst_margin, worst_time, worst_excess, parameters, tolerances, notes}
nlohmann::json to_json(const EstimateReport& r);

/// {"config_hash": ..., "checks": [...]} pretty-printed.
std::string estimate_reports_json(const std::vector<EstimateReport>& reports, const std::string& config_hash);

/// Fixed-width text table, one row per check.
std::string estimate_reports_table(const std::vector<EstimateReport>& reports, const std::string& config_hash);

}  // namespace yfl
