#include "yfl/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "yfl/expr.hpp"
#include "yfl/field_io.hpp"
#include "yfl/parallel.hpp"
#include "yfl/report.hpp"
#include "yfl/rng.hpp"
#include "yfl/series_io.hpp"
#include "yfl/svg.hpp"
#include "yfl/yamabe_constant.hpp"

namespace yfl {

using json = nlohmann::json;

const char* to_string(SequenceFamily f) {
    switch (f) {
        case SequenceFamily::C0Convergent: return "c0";
        case SequenceFamily::LpOnly: return "lp-only";
        case SequenceFamily::L1WithBounds: return "l1-bounded";
    }
    return "?";
}

SequenceFamily parse_family(const std::string& s) {
    if (s == "c0") return SequenceFamily::C0Convergent;
    if (s == "lp-only") return SequenceFamily::LpOnly;
    if (s == "l1-bounded") return SequenceFamily::L1WithBounds;
    throw std::invalid_argument("unknown sequence family '" + s + "' (expected c0, lp-only or l1-bounded)");
}

double default_amplitude(SequenceFamily f) {
    return f == SequenceFamily::L1WithBounds ? 0.3 : 1.0;
}

BackgroundPtr BackgroundSpec::build() const {
    if (dim < 3) throw std::invalid_argument("dimension must be at least 3");
    GridPtr grid = make_grid(dim, nodes, periods);
    switch (kind) {
        case BackgroundKind::Flat: return make_flat_background(grid, diff);
        case BackgroundKind::ConformallyFlat:
            return make_conformally_flat_background(sample_expression(grid, phi), diff);
        case BackgroundKind::Synthetic: return make_synthetic_background(sample_expression(grid, R0), diff);
    }
    throw std::logic_error("unhandled background kind");
}

ScalarField periodic_bump(const GridPtr& grid, const std::vector<double>& center, double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
    if (center.size() != static_cast<std::size_t>(grid->dim))
        throw std::invalid_argument("bump centre has the wrong dimension");
    return ScalarField::from_function(grid, [&](std::span<const double> x) {
        double d2 = 0.0;
        for (int a = 0; a < grid->dim; ++a) {
            const double L = grid->periods[a];
            double d = x[a] - center[a];
            d -= L * std::round(d / L);
            d2 += d * d;
        }
        const double s2 = d2 / (radius * radius);
        return s2 < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - s2)) : 0.0;
    });
}

ScalarField c0_direction(const GridPtr& grid, std::uint64_t seed) {
    const ScalarField s = random_smooth_start(grid, seed, 0x63300001, 0.5, 2);
    const double lo = s.min(), hi = s.max();
    return map(s, [&](double v) { return (v - lo) / (hi - lo); });
}

namespace {

std::vector<double> bump_center(const GridPtr& grid, std::uint64_t seed) {
    Rng rng(seed, 0x6c700001);
    std::vector<double> c(grid->dim);
    for (int a = 0; a < grid->dim; ++a)
        c[a] = grid->spacing(a) * static_cast<double>(rng.integer(0, static_cast<long long>(grid->nodes[a]) - 1));
    return c;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::vector<ScalarField> generate_sequence(const ExperimentSpec& spec, const GridPtr& grid) {
    const ScalarField u = sample_expression(grid, spec.limit);
    if (!(u.min() > kPositivityFloor)) throw std::invalid_argument("limit factor u must be positive");
    const double amp = spec.amplitude.value_or(default_amplitude(spec.family));
    if (!(amp >= 0.0) || !std::isfinite(amp)) throw std::invalid_argument("amplitude must be finite and >= 0");

    std::vector<ScalarField> seq;
    seq.reserve(spec.N);
    switch (spec.family) {
        case SequenceFamily::C0Convergent: {
            const ScalarField eta = c0_direction(grid, spec.seed);
            for (std::size_t i = 1; i <= spec.N; ++i)
                seq.push_back(u + eta * (amp / std::pow(static_cast<double>(i), spec.amplitude_power)));
            break;
        }
        case SequenceFamily::LpOnly: {
            if (!(spec.radius > 0.0)) throw std::invalid_argument("bump radius must be positive");
            const auto c = bump_center(grid, spec.seed);
            for (std::size_t i = 1; i <= spec.N; ++i)
                seq.push_back(u + periodic_bump(grid, c, spec.radius / static_cast<double>(i)) * amp);
            break;
        }
        case SequenceFamily::L1WithBounds: {
            if (!(spec.C0 >= 1.0)) throw std::invalid_argument("C0 must be at least 1");
            const double L = grid->periods[0];
            // Member i oscillates at the odd frequency k = 2i - 1. On grids whose x1 node
            // count is coprime to k the samples of |sin| are a permutation of those for
            // k = 1, so the L1 distance scales exactly like the amplitude.
            for (std::size_t i = 1; i <= spec.N; ++i) {
                const std::size_t k = 2 * i - 1;
                if (2 * k >= grid->nodes[0] || std::gcd(k, grid->nodes[0]) != 1)
                    throw std::invalid_argument("oscillation frequency " + std::to_string(k) + " of member " +
                                                std::to_string(i) + " is not resolved by " +
                                                std::to_string(grid->nodes[0]) + " nodes along x1");
                const double a = amp / std::sqrt(static_cast<double>(i));
                const ScalarField osc = ScalarField::from_function(grid, [&](std::span<const double> x) {
                    return 1.0 + a * std::sin(2.0 * std::numbers::pi * static_cast<double>(k) * x[0] / L);
                });
                seq.push_back(map(u * osc, [&](double v) { return std::clamp(v, 1.0 / spec.C0, spec.C0); }));
            }
            break;
        }
    }

    for (std::size_t i = 0; i < seq.size(); ++i) {
        const ScalarField& f = seq[i];
        const std::string who = "member " + std::to_string(i + 1);
        if (!f.all_finite()) throw std::invalid_argument(who + " is not finite");
        if (!(f.min() > kPositivityFloor)) throw std::invalid_argument(who + " is not positive");
        if (spec.family == SequenceFamily::L1WithBounds &&
            (f.min() < 1.0 / spec.C0 || f.max() > spec.C0))
            throw std::invalid_argument(who + " leaves [1/C0, C0]");
    }
    return seq;
}

std::vector<double> ClosednessReport::sup_tstar() const {
    std::vector<double> v;
    for (const auto& m : members) v.push_back(m.sup_tstar);
    return v;
}

std::vector<double> ClosednessReport::sup_initial() const {
    std::vector<double> v;
    for (const auto& m : members) v.push_back(m.sup0);
    return v;
}

namespace {

void check_invariants(MemberResult& m, const ExperimentSpec& spec) {
    const auto& s = m.series.samples;
    if (s.empty()) return;
    const bool normalized = m.series.config.mode == FlowMode::Normalized;
    double worst_drift = 0.0;
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (normalized) {
            const double drift = std::abs(s[k].volume - s[0].volume) / s[0].volume;
            worst_drift = std::max(worst_drift, drift);
        }
        const double prev = s[k - 1].total_scalar;
        if (s[k].total_scalar > prev + spec.monotone_slack * std::max(1.0, std::abs(prev))) {
            m.invariant_failures.push_back("total scalar curvature rose from " + fmt(prev) + " to " +
                                           fmt(s[k].total_scalar) + " at t=" + fmt(s[k].t));
            break;
        }
    }
    if (worst_drift > spec.volume_tol)
        m.invariant_failures.push_back("relative volume drift " + fmt(worst_drift) + " exceeds " +
                                       fmt(spec.volume_tol));
}

double rel_change(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-12); }

ContinuityProbe continuity_probe(const ScalarField& u, const BackgroundPtr& bg, const FlowConfig& cfg,
                                 const TimeSeries& limit, double tol) {
    ContinuityProbe p;
    const double total0 = total_scalar(ConformalMetric(bg, u));
    if (limit.samples.size() >= 2) {
        p.sample_time = limit.samples[1].t;
        p.sample_rel_err = rel_change(limit.samples[1].total_scalar, total0);
    }
    const FlowState s0 = make_state(bg, u);
    FlowConfig c = cfg;
    c.dt = p.sample_time > 0.0 ? p.sample_time : cfg.dt;
    for (int halvings = 0; halvings < 40; ++halvings) {
        const FlowState s1 = step(s0, bg, c);
        p.probe_step = c.dt;
        p.probe_rel_err = rel_change(s1.total_scalar, total0);
        if (p.probe_rel_err <= tol) break;
        c.dt *= 0.5;
    }
    p.ok = p.probe_rel_err <= tol;
    return p;
}

bool strictly_decreasing_from(const std::vector<double>& v, std::size_t from, std::size_t& bad) {
    // `from` is 1-based: entries from, from+1, ... must decrease strictly.
    for (std::size_t i = std::max<std::size_t>(from, 1); i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) {
            bad = i + 1;
            return false;
        }
    }
    return true;
}

}  // namespace

ClosednessReport run_closedness_experiment(const ExperimentSpec& spec) {
    ClosednessReport rep;
    rep.spec = spec;
    const BackgroundPtr bg = spec.background.build();
    const GridPtr grid = bg->grid;
    const int n = bg->dim();
    const bool positive = bg->kind == BackgroundKind::Synthetic && bg->R0.min() > 0.0;
    rep.operator_level = bg->kind == BackgroundKind::Synthetic;
    rep.label = rep.operator_level
                    ? "operator-level: synthetic background prescribes R0 on a flat torus chart"
                    : "geometric: " + std::string(to_string(bg->kind)) + " torus";

    bool hypothesis_failed = false, numerical_failed = false, conclusion_failed = false;
    auto fail = [&](bool& flag, const std::string& msg) {
        flag = true;
        rep.failures.push_back(msg);
    };

    FlowConfig fc = spec.flow;
    // The L1 argument runs along the unnormalized flow.
    if (spec.family == SequenceFamily::L1WithBounds) fc.mode = FlowMode::Unnormalized;
    fc.validate();
    rep.t_star = 0.5 * fc.horizon;
    fc.snapshot_times.push_back(0.0);
    fc.snapshot_times.push_back(rep.t_star);
    std::sort(fc.snapshot_times.begin(), fc.snapshot_times.end());
    fc.snapshot_times.erase(std::unique(fc.snapshot_times.begin(), fc.snapshot_times.end()), fc.snapshot_times.end());

    const ScalarField u = sample_expression(grid, spec.limit);
    if (!(u.min() > kPositivityFloor)) throw std::invalid_argument("limit factor u must be positive");
    const std::vector<ScalarField> seq = generate_sequence(spec, grid);
    const std::size_t N = seq.size();

    const MetricSummary limit0 = summarize(ConformalMetric(bg, u));
    rep.limit_total = limit0.total_scalar;

    const double p_crit = 2.0 * n / (n - 2.0);
    rep.members.resize(N);
    double max_total = -std::numeric_limits<double>::infinity();
    double min_R = limit0.inf_R;
    std::vector<double> inf_R(N);
    for (std::size_t i = 0; i < N; ++i) {
        MemberResult& m = rep.members[i];
        m.index = i + 1;
        const MetricSummary s = summarize(ConformalMetric(bg, seq[i]));
        m.total_scalar0 = s.total_scalar;
        inf_R[i] = s.inf_R;
        max_total = std::max(max_total, s.total_scalar);
        const FieldDistances d = field_metrics(seq[i], u, bg->vol_weights, p_crit);
        m.sup0 = d.sup;
        m.l1_0 = d.l1;
        m.lp0 = d.lp;
    }
    if (N > 0) min_R = *std::min_element(inf_R.begin(), inf_R.end());

    // kappa
    rep.kappa_auto = !spec.kappa.has_value();
    rep.kappa = spec.kappa.value_or(N > 0 ? max_total : rep.limit_total);
    for (const auto& m : rep.members) {
        if (m.total_scalar0 > rep.kappa + spec.tol.allowed(rep.kappa))
            fail(hypothesis_failed, "member " + std::to_string(m.index) + " total scalar curvature " +
                                        fmt(m.total_scalar0) + " exceeds kappa " + fmt(rep.kappa));
    }

    // Family-specific convergence behaviour of the initial data.
    std::size_t bad = 0;
    const auto lp0 = [&] {
        std::vector<double> v;
        for (const auto& m : rep.members) v.push_back(m.lp0);
        return v;
    }();
    const auto l10 = [&] {
        std::vector<double> v;
        for (const auto& m : rep.members) v.push_back(m.l1_0);
        return v;
    }();
    switch (spec.family) {
        case SequenceFamily::C0Convergent:
            if (!strictly_decreasing_from(rep.sup_initial(), 1, bad) && spec.amplitude.value_or(1.0) > 0.0)
                fail(hypothesis_failed, "initial sup distances do not decrease at member " + std::to_string(bad));
            break;
        case SequenceFamily::LpOnly:
            if (!strictly_decreasing_from(lp0, 1, bad) && spec.amplitude.value_or(1.0) > 0.0)
                fail(hypothesis_failed, "initial L^{2n/(n-2)} distances do not decrease at member " +
                                            std::to_string(bad));
            break;
        case SequenceFamily::L1WithBounds:
            if (bg->kind == BackgroundKind::Synthetic && bg->R0.max() > 0.0)
                fail(hypothesis_failed, "the L1 family needs a Yamabe-nonpositive background");
            if (!strictly_decreasing_from(l10, 1, bad) && spec.amplitude.value_or(1.0) > 0.0)
                fail(hypothesis_failed, "initial L1 distances do not decrease at member " + std::to_string(bad));
            break;
    }

    // delta and sigma, positive case only.
    if (positive) {
        double delta_min = min_R;
        if (spec.delta) {
            const ScalarField delta = sample_expression(grid, *spec.delta);
            delta_min = delta.min();
            for (std::size_t i = 0; i < N; ++i) {
                const ScalarField R = scalar_curvature(ConformalMetric(bg, seq[i]));
                for (std::size_t k = 0; k < R.size(); ++k) {
                    if (R[k] < delta[k] - spec.tol.allowed(delta[k])) {
                        fail(hypothesis_failed, "R(g_" + std::to_string(i + 1) + ") = " + fmt(R[k]) +
                                                    " falls below delta = " + fmt(delta[k]) + " at node " +
                                                    std::to_string(k));
                        break;
                    }
                }
            }
        }
        rep.delta_min = delta_min;
        rep.sigma = std::max(1.0 - delta_min, 1.0);
    } else if (spec.delta) {
        rep.failures.push_back("note: delta is ignored outside the positive synthetic case");
    }

    // Flows: index 0 is the limit, i >= 1 the members.
    std::vector<TimeSeries> runs(N + 1);
    parallel_for(N + 1, resolve_threads(spec.threads), [&](std::size_t k) {
        runs[k] = run_flow(k == 0 ? u : seq[k - 1], bg, fc);
    });

    rep.limit.index = 0;
    rep.limit.total_scalar0 = rep.limit_total;
    rep.limit.series = std::move(runs[0]);
    for (std::size_t i = 0; i < N; ++i) rep.members[i].series = std::move(runs[i + 1]);

    auto finish_run = [&](MemberResult& m) {
        m.flow_completed = m.series.completed;
        m.abort_reason = m.series.abort_reason;
        const std::string who = m.index == 0 ? "limit" : "member " + std::to_string(m.index);
        if (!m.flow_completed) {
            fail(numerical_failed, who + " flow aborted: " + m.abort_reason);
            return;
        }
        check_invariants(m, spec);
        for (const auto& f : m.invariant_failures) fail(numerical_failed, who + ": " + f);
        if (positive && rep.sigma && fc.mode == FlowMode::Normalized) {
            m.checks.push_back(scalar_lower_preservation_check(m.series, *rep.delta_min, spec.tol));
            m.checks.push_back(brendle_sup_bound_check(m.series, rep.kappa, limit0.volume, *rep.sigma, spec.tol));
            for (const auto& c : m.checks) {
                if (c.status == CheckStatus::ConclusionFailed)
                    fail(conclusion_failed, who + ": " + c.name + " violated (margin " + fmt(c.worst_margin) + ")");
                else if (c.status == CheckStatus::HypothesisFailed)
                    fail(hypothesis_failed, who + ": " + c.name + " hypothesis failed");
            }
        }
    };
    finish_run(rep.limit);
    for (auto& m : rep.members) finish_run(m);

    // Sup distances at t*.
    const Snapshot* ref = rep.limit.flow_completed ? rep.limit.series.snapshot_near(rep.t_star) : nullptr;
    for (auto& m : rep.members) {
        const Snapshot* s = m.flow_completed ? m.series.snapshot_near(rep.t_star) : nullptr;
        m.sup_tstar = (ref && s) ? field_metrics(s->u, ref->u, bg->vol_weights, 1.0).sup
                                 : std::numeric_limits<double>::quiet_NaN();
    }

    // Conclusion.
    rep.margin = rep.kappa - rep.limit_total;
    if (rep.margin < -spec.tol.allowed(rep.kappa))
        fail(conclusion_failed, "limit total scalar curvature " + fmt(rep.limit_total) + " exceeds kappa " +
                                    fmt(rep.kappa));
    if (!numerical_failed && !strictly_decreasing_from(rep.sup_tstar(), spec.decrease_from, bad))
        fail(conclusion_failed, "sup distances at t* stop decreasing at member " + std::to_string(bad));

    if (rep.limit.flow_completed) {
        rep.continuity = continuity_probe(u, bg, fc, rep.limit.series, spec.continuity_tol);
        if (!rep.continuity.ok)
            fail(conclusion_failed, "total scalar curvature does not approach its t=0 value (" +
                                        fmt(rep.continuity.probe_rel_err) + ")");
    }

    if (spec.family == SequenceFamily::L1WithBounds && !numerical_failed) {
        std::vector<ConvergencePair> pairs;
        for (const auto& m : rep.members) {
            const Snapshot* s = m.series.snapshot_near(rep.t_star);
            pairs.push_back({s->u, ref->u});
        }
        rep.convergence = uniform_convergence_probe(pairs, spec.C0, bg->vol_weights, spec.decrease_from, spec.tol);
        const auto& c = rep.convergence->report;
        if (c.status == CheckStatus::HypothesisFailed)
            fail(hypothesis_failed, "uniform-convergence probe: " +
                                        (c.notes.empty() ? std::string("hypothesis failed") : c.notes.back()));
        else if (c.status == CheckStatus::ConclusionFailed)
            fail(conclusion_failed, "uniform-convergence probe: sup distances stop decreasing");
    }

    rep.exit_code = hypothesis_failed ? 2 : numerical_failed ? 3 : conclusion_failed ? 1 : 0;
    rep.pass = rep.exit_code == 0;
    return rep;
}

namespace {

json run_json(const MemberResult& m) {
    json checks = json::array();
    for (const auto& c : m.checks) checks.push_back(to_json(c));
    double drift = 0.0;
    const auto& s = m.series.samples;
    for (const auto& x : s) drift = std::max(drift, std::abs(x.volume - s.front().volume) / s.front().volume);
    return {{"index", m.index},
            {"total_scalar0", m.total_scalar0},
            {"sup0", m.sup0},
            {"l1_0", m.l1_0},
            {"lp0", m.lp0},
            {"sup_tstar", m.sup_tstar},
            {"flow_completed", m.flow_completed},
            {"abort_reason", m.abort_reason},
            {"invariant_failures", m.invariant_failures},
            {"volume_drift", drift},
            {"total_scalar_final", s.empty() ? 0.0 : s.back().total_scalar},
            {"warnings", m.series.warnings},
            {"checks", checks}};
}

std::string run_name(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "member_%02zu", index);
    return buf;
}

json nan_safe(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::string report_json(const ClosednessReport& r, const std::string& config_hash) {
    const ExperimentSpec& s = r.spec;
    json j;
    j["schema"] = "yfl.closedness/1";
    j["config_hash"] = config_hash;
    j["label"] = r.label;
    j["operator_level"] = r.operator_level;
    j["family"] = to_string(s.family);
    j["N"] = s.N;
    j["seed"] = s.seed;
    j["limit_expr"] = s.limit;
    j["background"] = {{"dim", s.background.dim},
                       {"nodes", s.background.nodes},
                       {"periods", s.background.periods},
                       {"kind", to_string(s.background.kind)}};
    j["flow"] = {{"mode", to_string(r.limit.series.config.mode)},
                 {"dt", s.flow.dt},
                 {"T", s.flow.horizon},
                 {"stepper", to_string(s.flow.stepper)}};
    j["t_star"] = r.t_star;
    j["limit_total"] = r.limit_total;
    j["kappa"] = r.kappa;
    j["kappa_auto"] = r.kappa_auto;
    j["margin"] = r.margin;
    j["delta_min"] = r.delta_min ? json(*r.delta_min) : json(nullptr);
    j["sigma"] = r.sigma ? json(*r.sigma) : json(nullptr);
    j["decrease_from"] = s.decrease_from;
    j["limit"] = run_json(r.limit);
    j["members"] = json::array();
    for (const auto& m : r.members) {
        json mj = run_json(m);
        mj["sup_tstar"] = nan_safe(m.sup_tstar);
        j["members"].push_back(mj);
    }
    j["continuity"] = {{"sample_time", r.continuity.sample_time},
                       {"sample_rel_err", r.continuity.sample_rel_err},
                       {"probe_step", r.continuity.probe_step},
                       {"probe_rel_err", r.continuity.probe_rel_err},
                       {"tolerance", s.continuity_tol},
                       {"ok", r.continuity.ok}};
    if (r.convergence) {
        j["convergence"] = {{"report", to_json(r.convergence->report)},
                            {"sup_distances", r.convergence->sup_distances},
                            {"l1_distances", r.convergence->l1_distances},
                            {"fitted_exponent", r.convergence->fitted_exponent}};
    } else {
        j["convergence"] = nullptr;
    }
    j["pass"] = r.pass;
    j["exit_code"] = r.exit_code;
    j["failures"] = r.failures;
    return j.dump(2) + "\n";
}

void emit_report(const std::filesystem::path& dir, const ClosednessReport& r, const std::string& config_hash) {
    std::filesystem::create_directories(dir / "runs");
    std::filesystem::create_directories(dir / "plots");
    write_text_file(dir / "report.json", report_json(r, config_hash));

    std::ostringstream csv;
    csv << "# config_hash=" << config_hash << "\n";
    csv << "i,total_scalar0,sup0,l1_0,lp0,sup_tstar\n";
    for (const auto& m : r.members)
        csv << m.index << "," << format_double(m.total_scalar0) << "," << format_double(m.sup0) << ","
            << format_double(m.l1_0) << "," << format_double(m.lp0) << "," << format_double(m.sup_tstar) << "\n";
    write_text_file(dir / "distances.csv", csv.str());

    auto write_run = [&](const std::string& name, const TimeSeries& ts) {
        std::ostringstream os;
        write_series_csv(os, ts, config_hash);
        write_text_file(dir / "runs" / (name + ".csv"), os.str());
    };
    write_run("limit", r.limit.series);
    for (const auto& m : r.members) write_run(run_name(m.index), m.series);

    const std::string comment = "config_hash=" + config_hash;
    std::vector<double> idx;
    for (const auto& m : r.members) idx.push_back(static_cast<double>(m.index));
    std::vector<double> lp, l1;
    for (const auto& m : r.members) {
        lp.push_back(m.lp0);
        l1.push_back(m.l1_0);
    }
    write_text_file(dir / "plots" / "distances.svg",
                    svg_line_chart("distance to the limit vs i", "i",
                                   {{"sup at t=0", idx, r.sup_initial()},
                                    {"sup at t*", idx, r.sup_tstar()},
                                    {"L1 at t=0", idx, l1},
                                    {"Lp at t=0", idx, lp}},
                                   comment, true));
    std::vector<PlotLine> totals;
    auto add_total = [&](const std::string& label, const TimeSeries& ts) {
        PlotLine line{label, {}, {}};
        for (const auto& s : ts.samples) {
            line.x.push_back(s.t);
            line.y.push_back(s.total_scalar);
        }
        totals.push_back(std::move(line));
    };
    add_total("limit", r.limit.series);
    for (const auto& m : r.members) add_total("i=" + std::to_string(m.index), m.series);
    write_text_file(dir / "plots" / "total_scalar.svg",
                    svg_line_chart("total scalar curvature along each run", "t", totals, comment));
}

}  // namespace yfl
