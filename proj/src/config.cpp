#include "yfl/config.hpp"

#include <stdexcept>

#include "yfl/expr.hpp"
#include "yfl/field_io.hpp"
#include "yfl/hash.hpp"
#include "yfl/parallel.hpp"

namespace yfl {

const std::set<std::string>& background_keys() {
    static const std::set<std::string> k{"n", "nodes", "periods", "kind", "phi", "R0", "diff", "background_dir"};
    return k;
}

const std::set<std::string>& flow_keys() {
    static const std::set<std::string> k{"mode",           "dt",       "T",      "stepper", "monitor_stride", "dealias",
                                         "snapshot_every", "snapshot_times", "u0", "u0_file"};
    return k;
}

const std::set<std::string>& experiment_keys() {
    static const std::set<std::string> k{"limit",         "family",         "N",          "amplitude",
                                         "amplitude_power", "radius",       "kappa",      "delta",
                                         "C0",            "decrease_from",  "continuity_tol", "volume_tol",
                                         "monotone_slack", "tol_abs",       "tol_rel"};
    return k;
}

const std::set<std::string>& yamabe_keys() {
    static const std::set<std::string> k{"starts", "start_amplitude", "max_mode"};
    return k;
}

const std::set<std::string>& check_keys() {
    static const std::set<std::string> k{"checks", "series", "series_b", "Y",      "kappa",         "vol",
                                         "R0_min", "sigma",  "delta",    "psi",    "l1_variable",   "C0",
                                         "monotone_from", "alpha", "beta", "column", "tol_abs", "tol_rel"};
    return k;
}

const std::set<std::string>& common_keys() {
    static const std::set<std::string> k{"seed", "threads"};
    return k;
}

std::set<std::string> keys_for(const std::string& sub) {
    std::set<std::string> out = common_keys();
    auto add = [&](const std::set<std::string>& s) { out.insert(s.begin(), s.end()); };
    if (sub == "background") {
        add(background_keys());
    } else if (sub == "flow") {
        add(background_keys());
        add(flow_keys());
    } else if (sub == "experiment") {
        add(background_keys());
        add(flow_keys());
        add(experiment_keys());
    } else if (sub == "yamabe") {
        add(background_keys());
        add(yamabe_keys());
        out.insert({"dt", "T", "stepper"});
    } else if (sub == "check") {
        add(check_keys());
    } else {
        throw std::invalid_argument("unknown subcommand '" + sub + "'");
    }
    return out;
}

namespace {

DiffMode parse_diff(const std::string& s) {
    if (s == "spectral") return DiffMode::Spectral;
    if (s == "fd4") return DiffMode::FiniteDifference4;
    throw std::invalid_argument("unknown diff mode '" + s + "' (expected spectral or fd4)");
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_double(part, what));
    return out;
}

std::size_t nonneg(long v, const std::string& what) {
    if (v < 0) throw std::invalid_argument(what + " must be nonnegative");
    return static_cast<std::size_t>(v);
}

}  // namespace

BackgroundSpec background_spec_from_config(const KeyValueConfig& c) {
    BackgroundSpec b;
    b.dim = static_cast<int>(c.get_int("n", 3));
    if (b.dim < 3) throw std::invalid_argument("dimension below 3 (n = " + std::to_string(b.dim) + ")");
    const auto nodes = split(c.get_string("nodes", "16"), ',');
    const auto periods = parse_list(c.get_string("periods", "1"), "periods");
    if (nodes.size() != 1 && nodes.size() != static_cast<std::size_t>(b.dim))
        throw std::invalid_argument("nodes needs 1 or n entries");
    if (periods.size() != 1 && periods.size() != static_cast<std::size_t>(b.dim))
        throw std::invalid_argument("periods needs 1 or n entries");
    b.nodes.clear();
    b.periods.clear();
    for (int a = 0; a < b.dim; ++a) {
        const long v = parse_int(nodes[nodes.size() == 1 ? 0 : a], "nodes");
        b.nodes.push_back(static_cast<std::size_t>(v));
        const double p = periods[periods.size() == 1 ? 0 : a];
        if (!(p > 0.0)) throw std::invalid_argument("periods must be positive");
        b.periods.push_back(p);
    }
    b.kind = parse_background_kind(c.get_string("kind", "flat"));
    b.phi = c.get_string("phi", "1");
    b.R0 = c.get_string("R0", "0");
    b.diff = parse_diff(c.get_string("diff", "spectral"));
    return b;
}

BackgroundPtr background_from_config(const KeyValueConfig& c) {
    if (auto dir = c.get("background_dir")) return load_background(*dir);
    return background_spec_from_config(c).build();
}

FlowConfig flow_from_config(const KeyValueConfig& c) {
    FlowConfig f;
    f.mode = parse_flow_mode(c.get_string("mode", "normalized"));
    f.dt = c.get_double("dt", f.dt);
    f.horizon = c.get_double("T", f.horizon);
    f.stepper = parse_stepper(c.get_string("stepper", to_string(f.stepper)));
    f.monitor_stride = nonneg(c.get_int("monitor_stride", 1), "monitor_stride");
    f.dealias = c.get_bool("dealias", false);
    f.snapshot_every = nonneg(c.get_int("snapshot_every", 0), "snapshot_every");
    if (auto s = c.get("snapshot_times"); s && !s->empty()) f.snapshot_times = parse_list(*s, "snapshot_times");
    f.validate();
    return f;
}

Tolerance tolerance_from_config(const KeyValueConfig& c) {
    Tolerance t;
    t.abs = c.get_double("tol_abs", t.abs);
    t.rel = c.get_double("tol_rel", t.rel);
    if (!(t.abs >= 0.0) || !(t.rel >= 0.0)) throw std::invalid_argument("tolerances must be nonnegative");
    return t;
}

ExperimentSpec experiment_from_config(const KeyValueConfig& c) {
    ExperimentSpec e;
    if (c.has("background_dir")) throw std::invalid_argument("experiments build their own background; drop background_dir");
    e.background = background_spec_from_config(c);
    e.limit = c.get_string("limit", e.limit);
    e.family = parse_family(c.get_string("family", to_string(e.family)));
    e.N = nonneg(c.get_int("N", static_cast<long>(e.N)), "N");
    if (auto a = c.get("amplitude")) e.amplitude = parse_double(*a, "amplitude");
    e.amplitude_power = c.get_double("amplitude_power", e.amplitude_power);
    e.radius = c.get_double("radius", e.radius);
    if (auto k = c.get("kappa"); k && *k != "auto") e.kappa = parse_double(*k, "kappa");
    if (auto d = c.get("delta"); d && *d != "auto") e.delta = *d;
    e.C0 = c.get_double("C0", e.C0);
    e.flow = flow_from_config(c);
    e.seed = static_cast<std::uint64_t>(c.get_int("seed", 1));
    e.decrease_from = nonneg(c.get_int("decrease_from", static_cast<long>(e.decrease_from)), "decrease_from");
    e.threads = nonneg(c.get_int("threads", 0), "threads");
    e.tol = tolerance_from_config(c);
    e.continuity_tol = c.get_double("continuity_tol", e.continuity_tol);
    e.volume_tol = c.get_double("volume_tol", e.volume_tol);
    e.monotone_slack = c.get_double("monotone_slack", e.monotone_slack);
    return e;
}

YamabeEstimateConfig yamabe_from_config(const KeyValueConfig& c) {
    YamabeEstimateConfig y;
    y.starts = nonneg(c.get_int("starts", static_cast<long>(y.starts)), "starts");
    y.amplitude = c.get_double("start_amplitude", y.amplitude);
    y.max_mode = static_cast<int>(c.get_int("max_mode", y.max_mode));
    y.horizon = c.get_double("T", y.horizon);
    y.dt = c.get_double("dt", y.dt);
    y.stepper = parse_stepper(c.get_string("stepper", to_string(y.stepper)));
    y.seed = static_cast<std::uint64_t>(c.get_int("seed", 1));
    y.threads = resolve_threads(nonneg(c.get_int("threads", 0), "threads"));
    return y;
}

void save_background(const std::filesystem::path& dir, const Background& bg, const std::string& hash) {
    std::filesystem::create_directories(dir);
    const std::string meta = "config_hash=" + hash + "\n";
    write_text_file(dir / "manifest.txt", meta + bg.manifest());
    write_field(dir / "R0.yfld", bg.R0, meta + "field=R0\n");
    write_field(dir / "vol_weights.yfld", bg.vol_weights, meta + "field=vol_weights\n");
    if (bg.kind == BackgroundKind::ConformallyFlat)
        write_field(dir / "phi.yfld", bg.conformal_to_flat, meta + "field=phi\n");
}

BackgroundPtr load_background(const std::filesystem::path& dir) {
    const KeyValueConfig m = KeyValueConfig::load(dir / "manifest.txt");
    const BackgroundKind kind = parse_background_kind(m.get_string("kind", "flat"));
    const DiffMode diff = parse_diff(m.get_string("diff", "spectral"));
    const FieldFile r0 = read_field(dir / "R0.yfld");
    switch (kind) {
        case BackgroundKind::Flat: return make_flat_background(r0.field.grid_ptr(), diff);
        case BackgroundKind::ConformallyFlat:
            return make_conformally_flat_background(read_field(dir / "phi.yfld").field, diff);
        case BackgroundKind::Synthetic: return make_synthetic_background(r0.field, diff);
    }
    throw std::logic_error("unhandled background kind");
}

std::string config_hash(const KeyValueConfig& c) { return git_blob_hash(c.to_string()); }

}  // namespace yfl
