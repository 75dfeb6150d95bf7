#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "yfl/flow.hpp"

namespace yfl {

/// Column order of the monitor CSV. The first seven are the stable contract;
/// the rest are extra monitors used by the estimate checks.
inline constexpr const char* kSeriesColumns[] = {"t",     "volume", "r",      "total_scalar",
                                                 "u_min", "u_max",  "inf_R",  "sup_R",
                                                 "int_R2", "int_dev2", "step"};

struct SeriesProvenance {
    std::string config_hash;
    std::string config_text;
    std::string background_manifest;
    std::string input_hash;
};

void write_series_csv(std::ostream& os, const TimeSeries& ts, const std::string& config_hash);

/// Writes series.csv, manifest.json, final_u.yfld and snapshots/ under `dir`.
void write_series(const std::filesystem::path& dir, const TimeSeries& ts, const SeriesProvenance& prov);

/// Reads back what write_series produced, snapshots included.
TimeSeries read_series(const std::filesystem::path& dir);

/// Writes a minimal line chart of each monitor column as SVG files under `dir`.
void write_series_plots(const std::filesystem::path& dir, const TimeSeries& ts, const std::string& config_hash);

}  // namespace yfl
