#include "yfl/yamabe_constant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "yfl/parallel.hpp"
#include "yfl/rng.hpp"

namespace yfl {

ScalarField random_smooth_start(const GridPtr& grid, std::uint64_t seed, std::size_t index,
                                double amplitude, int max_mode) {
    if (!(amplitude > 0.0 && amplitude < 1.0))
        throw std::invalid_argument("start amplitude must lie in (0, 1)");
    if (max_mode < 1) throw std::invalid_argument("max_mode must be at least 1");
    Rng rng(seed, index);
    const int n = grid->dim;
    struct Term {
        std::vector<double> k;
        double phase, weight;
    };
    std::vector<Term> terms(4);
    for (auto& term : terms) {
        bool nonzero = false;
        while (!nonzero) {
            term.k.assign(n, 0.0);
            for (int a = 0; a < n; ++a) {
                term.k[a] = 2.0 * std::numbers::pi * rng.integer(-max_mode, max_mode) / grid->periods[a];
                nonzero = nonzero || term.k[a] != 0.0;
            }
        }
        term.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        term.weight = rng.uniform(0.5, 1.0);
    }
    ScalarField p = ScalarField::from_function(grid, [&](std::span<const double> x) {
        double s = 0.0;
        for (const auto& term : terms) {
            double arg = term.phase;
            for (int a = 0; a < n; ++a) arg += term.k[a] * x[a];
            s += term.weight * std::cos(arg);
        }
        return s;
    });
    const double scale = std::max(std::abs(p.min()), std::abs(p.max()));
    for (double& v : p.values()) v = 1.0 + amplitude * v / scale;
    return p;
}

YamabeEstimate estimate_yamabe_constant(const BackgroundPtr& bg, const YamabeEstimateConfig& cfg) {
    if (cfg.starts == 0) throw std::invalid_argument("at least one start is required");
    FlowConfig fc;
    fc.mode = FlowMode::Normalized;
    fc.dt = cfg.dt;
    fc.horizon = cfg.horizon;
    fc.stepper = cfg.stepper;
    fc.monitor_stride = std::max<std::size_t>(1, fc.step_count());
    fc.validate();

    YamabeEstimate est;
    est.starts.resize(cfg.starts);
    parallel_for(cfg.starts, resolve_threads(cfg.threads), [&](std::size_t i) {
        const ScalarField u0 = random_smooth_start(bg->grid, cfg.seed, i, cfg.amplitude, cfg.max_mode);
        YamabeStartResult& res = est.starts[i];
        res.index = i;
        res.initial_quotient = yamabe_quotient(ConformalMetric(bg, u0));
        const TimeSeries ts = run_flow(u0, bg, fc);
        res.completed = ts.completed;
        res.abort_reason = ts.abort_reason;
        if (ts.completed) res.final_quotient = yamabe_quotient(ConformalMetric(bg, ts.final_u));
    });
    bool any = false;
    est.value = std::numeric_limits<double>::infinity();
    for (const auto& s : est.starts) {
        if (s.completed && s.final_quotient < est.value) {
            est.value = s.final_quotient;
            est.best_start = s.index;
            any = true;
        }
    }
    if (!any) throw std::runtime_error("no Yamabe-estimate run completed");
    return est;
}

bool yamabe_batches_agree(double a, double b, double vol0, int n, double rel) {
    const double scale = std::max({std::abs(a), std::abs(b), std::pow(vol0, 2.0 / n)});
    return std::abs(a - b) <= rel * scale;
}

}  // namespace yfl
