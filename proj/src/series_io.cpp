#include "yfl/series_io.hpp"

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "yfl/field_io.hpp"
#include "yfl/keyvalue.hpp"
#include "yfl/svg.hpp"

namespace yfl {

using json = nlohmann::json;

namespace {

std::string snapshot_name(std::size_t sample) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "sample_%06zu.yfld", sample);
    return buf;
}

json kv_object(const std::string& text) {
    json obj = json::object();
    const KeyValueConfig kv = KeyValueConfig::parse(text);
    for (const auto& [k, v] : kv.entries()) obj[k] = v;
    return obj;
}

}  // namespace

void write_series_csv(std::ostream& os, const TimeSeries& ts, const std::string& config_hash) {
    if (!config_hash.empty()) os << "# config_hash=" << config_hash << "\n";
    bool first = true;
    for (const char* c : kSeriesColumns) {
        os << (first ? "" : ",") << c;
        first = false;
    }
    os << "\n";
    for (const auto& s : ts.samples) {
        const double vals[] = {s.t, s.volume, s.r, s.total_scalar, s.u_min, s.u_max,
                               s.inf_R, s.sup_R, s.int_R2, s.int_dev2};
        for (double v : vals) os << format_double(v) << ",";
        os << s.step << "\n";
    }
}

void write_series(const std::filesystem::path& dir, const TimeSeries& ts, const SeriesProvenance& prov) {
    std::filesystem::create_directories(dir / "snapshots");
    {
        std::ostringstream csv;
        write_series_csv(csv, ts, prov.config_hash);
        write_text_file(dir / "series.csv", csv.str());
    }
    const std::string meta_base = "config_hash=" + prov.config_hash + "\n";
    json snaps = json::array();
    for (const auto& s : ts.snapshots) {
        const std::string name = snapshot_name(s.sample);
        write_field(dir / "snapshots" / name, s.u,
                    meta_base + "sample=" + std::to_string(s.sample) + "\nt=" + format_double(s.t) + "\n");
        snaps.push_back({{"sample", s.sample}, {"t", s.t}, {"file", "snapshots/" + name}});
    }
    if (!ts.final_u.empty()) write_field(dir / "final_u.yfld", ts.final_u, meta_base + "final=1\n");

    const FlowConfig& c = ts.config;
    json m;
    m["config_hash"] = prov.config_hash;
    m["config"] = kv_object(prov.config_text);
    m["background"] = kv_object(prov.background_manifest);
    m["input_hash"] = prov.input_hash;
    m["flow"] = {{"mode", to_string(c.mode)},
                 {"dt", c.dt},
                 {"effective_dt", c.effective_dt()},
                 {"horizon", c.horizon},
                 {"stepper", to_string(c.stepper)},
                 {"monitor_stride", c.monitor_stride},
                 {"dealias", c.dealias},
                 {"snapshot_every", c.snapshot_every},
                 {"snapshot_times", c.snapshot_times}};
    m["dim"] = ts.dim;
    m["kind"] = to_string(ts.kind);
    m["R0_min"] = ts.R0_min;
    m["R0_max"] = ts.R0_max;
    m["background_volume"] = ts.background_volume;
    m["completed"] = ts.completed;
    m["abort_reason"] = ts.abort_reason;
    m["warnings"] = ts.warnings;
    m["samples"] = ts.samples.size();
    m["columns"] = kSeriesColumns;
    m["snapshots"] = snaps;
    write_text_file(dir / "manifest.json", m.dump(2) + "\n");
}

TimeSeries read_series(const std::filesystem::path& dir) {
    const json m = json::parse(read_text_file(dir / "manifest.json"));
    TimeSeries ts;
    const json& f = m.at("flow");
    ts.config.mode = parse_flow_mode(f.at("mode").get<std::string>());
    ts.config.dt = f.at("dt").get<double>();
    ts.config.horizon = f.at("horizon").get<double>();
    ts.config.stepper = parse_stepper(f.at("stepper").get<std::string>());
    ts.config.monitor_stride = f.at("monitor_stride").get<std::size_t>();
    ts.config.dealias = f.at("dealias").get<bool>();
    ts.config.snapshot_every = f.at("snapshot_every").get<std::size_t>();
    ts.config.snapshot_times = f.at("snapshot_times").get<std::vector<double>>();
    ts.dim = m.at("dim").get<int>();
    ts.kind = parse_background_kind(m.at("kind").get<std::string>());
    ts.R0_min = m.at("R0_min").get<double>();
    ts.R0_max = m.at("R0_max").get<double>();
    ts.background_volume = m.at("background_volume").get<double>();
    ts.completed = m.at("completed").get<bool>();
    ts.abort_reason = m.at("abort_reason").get<std::string>();
    ts.warnings = m.at("warnings").get<std::vector<std::string>>();

    std::istringstream csv(read_text_file(dir / "series.csv"));
    std::string line;
    bool header = false;
    while (std::getline(csv, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            header = true;
            continue;
        }
        const auto cells = split(line, ',');
        if (cells.size() != std::size(kSeriesColumns))
            throw std::runtime_error("series.csv: unexpected column count");
        MonitorSample s;
        double* dst[] = {&s.t, &s.volume, &s.r, &s.total_scalar, &s.u_min, &s.u_max,
                         &s.inf_R, &s.sup_R, &s.int_R2, &s.int_dev2};
        for (std::size_t k = 0; k < std::size(dst); ++k) *dst[k] = parse_double(cells[k], kSeriesColumns[k]);
        s.step = static_cast<std::size_t>(parse_int(cells.back(), "step"));
        ts.samples.push_back(s);
    }
    GridPtr grid;
    for (const auto& s : m.at("snapshots")) {
        FieldFile ff = read_field(dir / s.at("file").get<std::string>());
        if (!grid) grid = ff.field.grid_ptr();
        ts.snapshots.push_back({s.at("sample").get<std::size_t>(), s.at("t").get<double>(),
                                ScalarField(grid, ff.field.data())});
    }
    if (std::filesystem::exists(dir / "final_u.yfld")) {
        FieldFile ff = read_field(dir / "final_u.yfld");
        ts.final_u = grid ? ScalarField(grid, ff.field.data()) : ff.field;
    }
    return ts;
}

void write_series_plots(const std::filesystem::path& dir, const TimeSeries& ts, const std::string& config_hash) {
    std::filesystem::create_directories(dir);
    std::vector<double> t;
    for (const auto& s : ts.samples) t.push_back(s.t);
    auto column = [&](double MonitorSample::*field) {
        std::vector<double> v;
        for (const auto& s : ts.samples) v.push_back(s.*field);
        return v;
    };
    const std::string comment = "config_hash=" + config_hash;
    write_text_file(dir / "volume.svg",
                    svg_line_chart("Vol(M, g(t))", "t", {{"volume", t, column(&MonitorSample::volume)}}, comment));
    write_text_file(dir / "r.svg", svg_line_chart("mean scalar curvature r(t)", "t",
                                                  {{"r", t, column(&MonitorSample::r)}}, comment));
    write_text_file(dir / "total_scalar.svg",
                    svg_line_chart("total scalar curvature", "t",
                                   {{"int R dvol", t, column(&MonitorSample::total_scalar)}}, comment));
    write_text_file(dir / "extrema.svg",
                    svg_line_chart("conformal factor extrema", "t",
                                   {{"u_min", t, column(&MonitorSample::u_min)},
                                    {"u_max", t, column(&MonitorSample::u_max)}},
                                   comment));
    write_text_file(dir / "inf_R.svg", svg_line_chart("inf R(g(t))", "t",
                                                      {{"inf R", t, column(&MonitorSample::inf_R)}}, comment));
}

}  // namespace yfl
