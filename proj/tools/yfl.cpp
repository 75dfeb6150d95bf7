// yfl: command-line front end for the Yamabe flow lab.
//
//   yfl [--config FILE] [--out DIR] [--set k=v]... [--seed S] [--threads T] [--quiet]
//       background | flow | check | experiment | yamabe  [--key value]...
//
// Exit codes: 0 ok, 1 conclusion failure, 2 hypothesis failure,
// 3 numerical abort, 4 usage error.

#include <cctype>
#include <cstdio>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "yfl/config.hpp"
#include "yfl/expr.hpp"
#include "yfl/field_io.hpp"
#include "yfl/hash.hpp"
#include "yfl/report.hpp"
#include "yfl/series_io.hpp"

namespace {

using namespace yfl;

enum Exit { kOk = 0, kConclusion = 1, kHypothesis = 2, kNumerical = 3, kUsage = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Context {
    std::string subcommand;
    KeyValueConfig config;
    std::string hash;
    std::filesystem::path out;
    bool quiet = false;
};

void say(const Context& ctx, const std::string& msg) {
    if (!ctx.quiet) std::cout << msg << "\n";
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------- background

int cmd_background(const Context& ctx) {
    const BackgroundPtr bg = background_from_config(ctx.config);
    save_background(ctx.out, *bg, ctx.hash);
    say(ctx, bg->manifest() + "written to " + ctx.out.string());
    return kOk;
}

// ---------------------------------------------------------------- flow

ScalarField initial_factor(const KeyValueConfig& c, const BackgroundPtr& bg) {
    if (auto f = c.get("u0_file")) {
        FieldFile ff = read_field(std::filesystem::path(*f));
        if (!(ff.field.grid() == *bg->grid))
            throw UsageError("u0_file grid does not match the background grid");
        return ScalarField(bg->grid, ff.field.data());
    }
    return sample_expression(bg->grid, c.get_string("u0", "1"));
}

int cmd_flow(const Context& ctx) {
    const BackgroundPtr bg = background_from_config(ctx.config);
    const FlowConfig fc = flow_from_config(ctx.config);
    const ScalarField u0 = initial_factor(ctx.config, bg);
    if (!(u0.min() > kPositivityFloor)) throw std::invalid_argument("u0 must be positive");

    const TimeSeries ts = run_flow(u0, bg, fc);
    SeriesProvenance prov;
    prov.config_hash = ctx.hash;
    prov.config_text = ctx.config.to_string();
    prov.background_manifest = bg->manifest();
    prov.input_hash = git_blob_hash(std::string_view(reinterpret_cast<const char*>(u0.data().data()),
                                                     u0.size() * sizeof(double)));
    write_series(ctx.out, ts, prov);
    write_series_plots(ctx.out / "plots", ts, ctx.hash);
    save_background(ctx.out / "background", *bg, ctx.hash);
    for (const auto& w : ts.warnings) std::cerr << "warning: " << w << "\n";
    if (!ts.completed) {
        std::cerr << "flow aborted: " << ts.abort_reason << "\n";
        return kNumerical;
    }
    const auto& a = ts.samples.front();
    const auto& b = ts.samples.back();
    say(ctx, "t=" + fmt(b.t) + " volume " + fmt(a.volume) + " -> " + fmt(b.volume) + ", r " + fmt(a.r) + " -> " +
                 fmt(b.r) + ", total scalar " + fmt(a.total_scalar) + " -> " + fmt(b.total_scalar));
    return kOk;
}

// ---------------------------------------------------------------- check

const std::vector<std::string> kCheckNames{"gronwall",    "ye-min",        "ye-max", "scalar-lower",
                                           "brendle-sup", "volume-bounds", "l1",     "uniform-convergence"};

// Lets alpha/beta be written in terms of t.
std::string time_expression(const std::string& text) {
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto word = [&](std::size_t k) {
            return k < text.size() && (std::isalnum(static_cast<unsigned char>(text[k])) || text[k] == '_');
        };
        if (text[i] == 't' && (i == 0 || !word(i - 1)) && !word(i + 1))
            out += "x1";
        else
            out += text[i];
    }
    return out;
}

double column_value(const MonitorSample& s, const std::string& col) {
    if (col == "u_max") return s.u_max;
    if (col == "u_min") return s.u_min;
    if (col == "volume") return s.volume;
    if (col == "r") return s.r;
    if (col == "total_scalar") return s.total_scalar;
    if (col == "inf_R") return s.inf_R;
    if (col == "sup_R") return s.sup_R;
    throw UsageError("unknown column '" + col + "'");
}

EstimateReport gronwall_check(const TimeSeries& ts, const KeyValueConfig& c, const Tolerance& tol) {
    EstimateReport rep;
    rep.name = "gronwall";
    rep.tolerance = tol;
    const auto alpha_text = c.get("alpha");
    if (!alpha_text) throw UsageError("gronwall needs alpha (an expression in t)");
    const Expression alpha = Expression::parse(time_expression(*alpha_text), 1);
    const Expression beta = Expression::parse(time_expression(c.get_string("beta", "0")), 1);
    const std::string col = c.get_string("column", "u_max");
    std::vector<double> t, a, b;
    for (const auto& s : ts.samples) {
        const double x[1] = {s.t};
        t.push_back(s.t);
        a.push_back(alpha.evaluate(x));
        b.push_back(beta.evaluate(x));
    }
    for (double v : b) {
        if (v < 0.0) {
            rep.status = CheckStatus::HypothesisFailed;
            rep.notes.push_back("beta must be nonnegative");
            return rep;
        }
    }
    const auto bound = gronwall_bound(a, b, t);
    MarginTracker tr(tol);
    for (std::size_t k = 0; k < t.size(); ++k) tr.observe(column_value(ts.samples[k], col), bound[k], t[k]);
    tr.finish(rep);
    rep.notes.push_back("column " + col + " against alpha(t) = " + *alpha_text);
    return rep;
}

int cmd_check(const Context& ctx, std::vector<std::string> names) {
    const KeyValueConfig& c = ctx.config;
    if (auto s = c.get("checks")) {
        for (const auto& n : split(*s, ',')) names.push_back(n);
    }
    const auto series_dir = c.get("series");
    if (!series_dir) throw UsageError("check needs series=<flow output directory>");
    const Tolerance tol = tolerance_from_config(c);

    const bool all = names.empty() || (names.size() == 1 && names[0] == "all");
    for (const auto& n : names) {
        if (n != "all" && std::find(kCheckNames.begin(), kCheckNames.end(), n) == kCheckNames.end())
            throw UsageError("unknown check '" + n + "'");
    }

    std::vector<std::string> members = split(*series_dir, ',');
    for (const auto& m : members) {
        if (!std::filesystem::exists(std::filesystem::path(m) / "manifest.json"))
            throw UsageError("no flow output in '" + m + "'");
    }
    const TimeSeries ts = read_series(members.front());
    if (ts.samples.empty()) throw std::invalid_argument("series has no samples");
    const auto& s0 = ts.samples.front();
    const bool normalized = ts.config.mode == FlowMode::Normalized;

    std::vector<std::string> selected;
    if (all) {
        if (c.has("alpha")) selected.push_back("gronwall");
        if (normalized && ts.R0_max <= 0.0) selected.insert(selected.end(), {"ye-min", "ye-max"});
        if (normalized) selected.push_back("scalar-lower");
        if (normalized && ts.R0_min > 0.0) selected.push_back("brendle-sup");
        if (!normalized) selected.push_back("volume-bounds");
        if (c.has("series_b") && members.size() == 1) selected.push_back("l1");
        if (c.has("series_b") && members.size() > 1) selected.push_back("uniform-convergence");
    } else {
        selected = names;
    }

    auto background = [&]() { return load_background(std::filesystem::path(members.front()) / "background"); };
    const double kappa = c.get_double("kappa", s0.total_scalar);
    const double vol = c.get_double("vol", s0.volume);

    std::vector<EstimateReport> reports;
    for (const auto& name : selected) {
        if (name == "gronwall") {
            reports.push_back(gronwall_check(ts, c, tol));
        } else if (name == "ye-min") {
            EstimateReport r = ye_min_bound_check(ts, c.get_double("Y", 0.0), vol, tol);
            if (!c.has("Y")) r.notes.push_back("Y defaulted to 0, the Yamabe constant of a flat torus");
            reports.push_back(r);
        } else if (name == "ye-max") {
            reports.push_back(ye_max_bound_check(ts, kappa, vol, c.get_double("R0_min", ts.R0_min), tol));
        } else if (name == "scalar-lower") {
            double delta = std::min(s0.inf_R, 0.0);
            if (auto d = c.get("delta")) delta = sample_expression(background()->grid, *d).min();
            reports.push_back(scalar_lower_preservation_check(ts, delta, tol));
        } else if (name == "brendle-sup") {
            const double sigma = c.get_double("sigma", std::max(1.0 - s0.inf_R, 1.0));
            reports.push_back(brendle_sup_bound_check(ts, kappa, vol, sigma, tol));
        } else if (name == "volume-bounds") {
            reports.push_back(volume_bounds_check(ts, kappa, c.get_double("Y", 0.0), tol));
        } else if (name == "l1") {
            const auto other = c.get("series_b");
            if (!other) throw UsageError("l1 needs series_b");
            const TimeSeries tb = read_series(*other);
            const BackgroundPtr bg = background();
            const ScalarField psi = sample_expression(bg->grid, c.get_string("psi", "1"));
            const std::string var = c.get_string("l1_variable", "density");
            if (var != "density" && var != "factor") throw UsageError("l1_variable must be density or factor");
            reports.push_back(l1_estimate_check(ts, tb, *bg, psi,
                                                var == "density" ? L1Variable::Density : L1Variable::Factor, tol));
        } else if (name == "uniform-convergence") {
            const auto limit_dir = c.get("series_b");
            if (!limit_dir) throw UsageError("uniform-convergence needs series_b (the limit run)");
            const TimeSeries limit = read_series(*limit_dir);
            const BackgroundPtr bg = background();
            std::vector<ConvergencePair> pairs;
            for (const auto& m : members) {
                const TimeSeries tm = read_series(m);
                if (tm.final_u.empty() || limit.final_u.empty())
                    throw std::invalid_argument("uniform-convergence needs final_u in every run");
                pairs.push_back({ScalarField(bg->grid, tm.final_u.data()), ScalarField(bg->grid, limit.final_u.data())});
            }
            reports.push_back(uniform_convergence_probe(pairs, c.get_double("C0", 3.0), bg->vol_weights,
                                                        static_cast<std::size_t>(c.get_int("monotone_from", 4)), tol)
                                  .report);
        }
    }

    write_text_file(ctx.out / "checks.json", estimate_reports_json(reports, ctx.hash));
    const std::string table = estimate_reports_table(reports, ctx.hash);
    write_text_file(ctx.out / "checks.txt", table);
    if (!ctx.quiet) std::cout << table;

    int code = kOk;
    for (const auto& r : reports) {
        if (r.status == CheckStatus::HypothesisFailed) code = kHypothesis;
        else if (r.status == CheckStatus::ConclusionFailed && code == kOk) code = kConclusion;
    }
    return code;
}

// ---------------------------------------------------------------- experiment

int cmd_experiment(const Context& ctx) {
    const ExperimentSpec spec = experiment_from_config(ctx.config);
    const ClosednessReport rep = run_closedness_experiment(spec);
    emit_report(ctx.out, rep, ctx.hash);
    if (!ctx.quiet) {
        std::cout << rep.label << "\n";
        std::cout << "limit total scalar " << fmt(rep.limit_total) << ", kappa " << fmt(rep.kappa) << ", margin "
                  << fmt(rep.margin) << "\n";
        for (const auto& m : rep.members)
            std::cout << "  i=" << m.index << " total " << fmt(m.total_scalar0) << " sup0 " << fmt(m.sup0)
                      << " sup(t*) " << fmt(m.sup_tstar) << "\n";
        std::cout << (rep.pass ? "PASS" : "FAIL") << "\n";
    }
    for (const auto& f : rep.failures) std::cerr << f << "\n";
    return rep.exit_code;
}

// ---------------------------------------------------------------- yamabe

int cmd_yamabe(const Context& ctx) {
    const BackgroundPtr bg = background_from_config(ctx.config);
    const YamabeEstimateConfig yc = yamabe_from_config(ctx.config);
    const YamabeEstimate est = estimate_yamabe_constant(bg, yc);
    nlohmann::json j;
    j["config_hash"] = ctx.hash;
    j["value"] = est.value;
    j["best_start"] = est.best_start;
    j["starts"] = nlohmann::json::array();
    for (const auto& s : est.starts)
        j["starts"].push_back({{"index", s.index},
                               {"initial_quotient", s.initial_quotient},
                               {"final_quotient", s.final_quotient},
                               {"completed", s.completed},
                               {"abort_reason", s.abort_reason}});
    write_text_file(ctx.out / "yamabe.json", j.dump(2) + "\n");
    say(ctx, "Yamabe constant estimate " + fmt(est.value) + " (start " + std::to_string(est.best_start) + ")");
    return kOk;
}

// Schema validation before any computation.
void validate_config(const std::string& sub, const KeyValueConfig& c) {
    c.require_known(keys_for(sub));
    if (sub == "background" || sub == "flow" || sub == "yamabe") {
        if (!c.has("background_dir")) background_spec_from_config(c);
    }
    if (sub == "flow") flow_from_config(c);
    if (sub == "experiment") experiment_from_config(c);
    if (sub == "yamabe") yamabe_from_config(c);
    if (sub == "check") tolerance_from_config(c);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Yamabe flow laboratory on periodic tori"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path, out_dir = "yfl_out";
    std::vector<std::string> sets;
    long seed = 1, threads = 0;
    bool quiet = false;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--set", sets, "key=value override (repeatable)");
    CLI::Option* seed_opt = app.add_option("--seed", seed, "random seed");
    CLI::Option* threads_opt = app.add_option("--threads", threads, "worker threads (default: YFL_THREADS or 1)")
                                   ->check(CLI::NonNegativeNumber);
    app.add_flag("--quiet", quiet, "suppress progress output");

    const std::vector<std::string> subs{"background", "flow", "check", "experiment", "yamabe"};
    std::map<std::string, std::map<std::string, std::string>> flag_values;
    std::vector<std::string> check_names;
    for (const auto& sub : subs) {
        CLI::App* cmd = app.add_subcommand(sub);
        auto& values = flag_values[sub];
        for (const auto& key : keys_for(sub)) {
            if (common_keys().count(key)) continue;
            std::string names = "--" + key;
            std::string dashed = key;
            std::replace(dashed.begin(), dashed.end(), '_', '-');
            if (dashed != key) names += ",--" + dashed;
            if (key == "periods") names += ",--period";
            cmd->add_option(names, values[key], "config key " + key);
        }
        if (sub == "check") cmd->add_option("names", check_names, "checks to run (default: all applicable)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    Context ctx;
    ctx.subcommand = app.get_subcommands().front()->get_name();
    ctx.quiet = quiet;
    ctx.out = out_dir;
    try {
        if (!config_path.empty()) ctx.config = KeyValueConfig::load(config_path);
        for (const auto& [key, value] : flag_values[ctx.subcommand]) {
            if (!value.empty()) ctx.config.set(key, value);
        }
        if (seed_opt->count()) ctx.config.set("seed", std::to_string(seed));
        if (threads_opt->count()) ctx.config.set("threads", std::to_string(threads));
        for (const auto& s : sets) ctx.config.apply_override(s);
        validate_config(ctx.subcommand, ctx.config);
        ctx.hash = git_blob_hash("subcommand=" + ctx.subcommand + "\n" + ctx.config.to_string());
        std::filesystem::create_directories(ctx.out);
        write_text_file(ctx.out / "config.txt", "# config_hash=" + ctx.hash + "\n# subcommand=" + ctx.subcommand +
                                                    "\n" + ctx.config.to_string());
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (ctx.subcommand == "background") return cmd_background(ctx);
        if (ctx.subcommand == "flow") return cmd_flow(ctx);
        if (ctx.subcommand == "check") return cmd_check(ctx, check_names);
        if (ctx.subcommand == "experiment") return cmd_experiment(ctx);
        if (ctx.subcommand == "yamabe") return cmd_yamabe(ctx);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const FlowAbort& e) {
        std::cerr << "numerical abort at t=" << fmt(e.time()) << ": " << e.what() << "\n";
        return kNumerical;
    } catch (const std::invalid_argument& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kHypothesis;
    } catch (const std::domain_error& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kHypothesis;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumerical;
    }
    return kUsage;
}
