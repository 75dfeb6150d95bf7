#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "yfl/estimates.hpp"
#include "yfl/experiments.hpp"
#include "yfl/report.hpp"

using namespace yfl;
using yfl::test::kTwoPi;

namespace {

std::vector<double> uniform_times(double T, std::size_t n) {
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) t[k] = T * static_cast<double>(k) / static_cast<double>(n - 1);
    return t;
}

/// Equality case of Gronwall: u = alpha + int_0^t beta u, i.e. v' = beta (alpha + v),
/// v(0) = 0, u = alpha + v. Integrated with RK4 on 16 substeps per node.
std::vector<double> gronwall_equality(const std::function<double(double)>& alpha,
                                      const std::function<double(double)>& beta, const std::vector<double>& t) {
    std::vector<double> u(t.size());
    double v = 0.0;
    u[0] = alpha(0.0);
    auto f = [&](double s, double y) { return beta(s) * (alpha(s) + y); };
    for (std::size_t k = 1; k < t.size(); ++k) {
        const int sub = 16;
        const double h = (t[k] - t[k - 1]) / sub;
        for (int j = 0; j < sub; ++j) {
            const double s = t[k - 1] + j * h;
            const double k1 = f(s, v), k2 = f(s + h / 2, v + h / 2 * k1), k3 = f(s + h / 2, v + h / 2 * k2),
                         k4 = f(s + h, v + h * k3);
            v += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        }
        u[k] = alpha(t[k]) + v;
    }
    return u;
}

FlowConfig config(FlowMode mode, double dt, double T) {
    FlowConfig c;
    c.mode = mode;
    c.dt = dt;
    c.horizon = T;
    return c;
}

/// prod_a ((1 + cos(2 pi x_a)) / 2)^2: vanishes on the planes x_a = 1/2
/// together with its Laplacian.
ScalarField cosine_bump(const GridPtr& g) {
    return ScalarField::from_function(g, [](auto x) {
        double v = 1.0;
        for (double xa : x) v *= std::pow(0.5 * (1.0 + std::cos(kTwoPi * xa)), 2);
        return v;
    });
}

ScalarField smooth_start(const GridPtr& g, std::uint64_t seed, double amp) {
    ScalarField u = test::TrigPoly::random(3, g->periods, seed, 1, 4, 0.0).sample(g) * (amp / 4.0);
    u += 1.0;
    return u;
}

}  // namespace

TEST_SUITE("estimates") {

TEST_CASE("Gronwall closed form for constant coefficients") {
    const auto t = uniform_times(1.0, 4001);
    for (auto [a, b] : {std::pair{2.0, 1.5}, std::pair{0.5, 0.0}, std::pair{1.0, 3.0}}) {
        const auto bound = gronwall_bound(std::vector<double>(t.size(), a), std::vector<double>(t.size(), b), t);
        double worst = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) {
            const double want = a * std::exp(b * t[k]);
            worst = std::max(worst, std::abs(bound[k] - want) / want);
        }
        CHECK(worst <= 1e-6);
    }
}

TEST_CASE("Gronwall bound dominates the equality case") {
    Rng rng(2024, 3);
    const auto t = uniform_times(1.0, 20001);
    double worst = -1e300;
    for (int trial = 0; trial < 50; ++trial) {
        const double a0 = rng.uniform(0.5, 2.0), a1 = rng.uniform(-0.4, 0.4), w = rng.uniform(0.5, 6.0);
        const double b0 = rng.uniform(0.0, 2.0), b1 = rng.uniform(0.0, 1.5), v = rng.uniform(0.5, 6.0);
        auto alpha = [=](double s) { return a0 + a1 * std::sin(w * s); };
        auto beta = [=](double s) { return b0 + b1 * std::pow(std::cos(v * s), 2); };
        std::vector<double> al, be;
        for (double s : t) {
            al.push_back(alpha(s));
            be.push_back(beta(s));
        }
        const auto bound = gronwall_bound(al, be, t);
        const auto u = gronwall_equality(alpha, beta, t);
        for (std::size_t k = 0; k < t.size(); ++k) worst = std::max(worst, u[k] - bound[k]);
    }
    MESSAGE("largest excess " << worst);
    CHECK(worst <= 1e-8);
}

TEST_CASE("Gronwall bound is monotone in beta and validates input") {
    const auto t = uniform_times(2.0, 201);
    std::vector<double> alpha(t.size()), b1(t.size()), b2(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        alpha[k] = 1.0 + 0.5 * t[k];
        b1[k] = 0.3 + 0.1 * std::sin(t[k]);
        b2[k] = b1[k] + 0.05;
    }
    const auto lo = gronwall_bound(alpha, b1, t), hi = gronwall_bound(alpha, b2, t);
    for (std::size_t k = 1; k < t.size(); ++k) CHECK(hi[k] > lo[k]);
    CHECK(lo[0] == alpha[0]);

    b1[4] = -0.1;
    CHECK_THROWS_AS(gronwall_bound(alpha, b1, t), std::invalid_argument);
    auto shifted = t;
    shifted[0] = 0.1;
    CHECK_THROWS_AS(gronwall_bound(alpha, b2, shifted), std::invalid_argument);
}

TEST_CASE("maximum-principle bounds on nonpositive backgrounds") {
    auto g = make_cubic_grid(3, 16);
    for (const auto& bg : {make_flat_background(g), make_synthetic_background(ScalarField(g, -1.0))}) {
        const TimeSeries ts = run_flow(smooth_start(g, 3, 0.3), bg, config(FlowMode::Normalized, 1e-4, 0.02));
        REQUIRE(ts.completed);
        const auto& s0 = ts.samples.front();
        const auto mn = ye_min_bound_check(ts, 0.0, s0.volume);
        const auto mx = ye_max_bound_check(ts, s0.total_scalar, s0.volume, bg->R0.min());
        CHECK(mn.holds());
        CHECK(mx.holds());
        CHECK(mx.worst_margin >= 0.0);

        // Tampering with the extremes must break the conclusions.
        TimeSeries bad = ts;
        bad.samples.back().u_max *= 10.0;
        bad.samples.back().u_min *= 0.1;
        CHECK(ye_max_bound_check(bad, s0.total_scalar, s0.volume, bg->R0.min()).status == CheckStatus::ConclusionFailed);
        CHECK(ye_min_bound_check(bad, 0.0, s0.volume).status == CheckStatus::ConclusionFailed);
    }
    const TimeSeries pos = run_flow(ScalarField(g, 1.0), make_synthetic_background(ScalarField(g, 1.0)),
                                    config(FlowMode::Normalized, 1e-3, 0.01));
    CHECK(ye_min_bound_check(pos, 0.0, 1.0).status == CheckStatus::HypothesisFailed);
}

TEST_CASE("scalar curvature lower bound and the sup bound on a positive background") {
    auto g = make_cubic_grid(3, 16);
    auto bg = make_synthetic_background(ScalarField(g, 6.0));
    const TimeSeries ts = run_flow(smooth_start(g, 5, 0.2), bg, config(FlowMode::Normalized, 1e-4, 0.02));
    REQUIRE(ts.completed);
    const auto& s0 = ts.samples.front();
    CHECK(scalar_lower_preservation_check(ts, s0.inf_R).holds());
    CHECK(scalar_lower_preservation_check(ts, s0.inf_R + 1.0).status == CheckStatus::HypothesisFailed);

    const double sigma = std::max(1.0 - s0.inf_R, 1.0);
    const auto b = brendle_sup_bound_check(ts, s0.total_scalar, s0.volume, sigma);
    CHECK(b.holds());
    CHECK(brendle_sup_bound_check(ts, s0.total_scalar, s0.volume, 0.5).status == CheckStatus::HypothesisFailed);
    CHECK(brendle_sup_bound_check(ts, s0.total_scalar - 1.0, s0.volume, sigma).status ==
          CheckStatus::HypothesisFailed);

    TimeSeries bad = ts;
    bad.samples.back().inf_R = std::min(s0.inf_R, 0.0) - 1.0;
    CHECK(scalar_lower_preservation_check(bad, s0.inf_R).status == CheckStatus::ConclusionFailed);
}

TEST_CASE("unnormalized volume bounds") {
    auto g = make_cubic_grid(3, 16);
    auto bg = make_flat_background(g);
    const TimeSeries ts = run_flow(smooth_start(g, 7, 0.3), bg, config(FlowMode::Unnormalized, 1e-4, 0.02));
    REQUIRE(ts.completed);
    const auto rep = volume_bounds_check(ts, ts.samples.front().total_scalar, 0.0);
    CHECK(rep.holds());
    const TimeSeries norm = run_flow(smooth_start(g, 7, 0.3), bg, config(FlowMode::Normalized, 1e-4, 0.001));
    CHECK(volume_bounds_check(norm, 0.0, 0.0).status == CheckStatus::HypothesisFailed);

    TimeSeries bad = ts;
    bad.samples.back().volume *= 2.0;
    CHECK(volume_bounds_check(bad, ts.samples.front().total_scalar, 0.0).status == CheckStatus::ConclusionFailed);
}

TEST_CASE("C[psi]") {
    auto flat16 = make_flat_background(make_cubic_grid(3, 16));
    CHECK(c_psi(*flat16, ScalarField(flat16->grid, 1.0)).value == 0.0);

    ScalarField neg(flat16->grid, 1.0);
    neg[0] = -0.1;
    CHECK_THROWS_AS(c_psi(*flat16, neg), std::invalid_argument);

    // A compactly supported bump leaks spectral Laplacian outside its support.
    CHECK_THROWS_AS(c_psi(*flat16, periodic_bump(flat16->grid, {0.5, 0.5, 0.5}, 0.3)), std::invalid_argument);

    // Quadrature refinement of a smooth bump.
    std::vector<double> values;
    for (std::size_t N : {32u, 64u}) {
        auto bg = make_flat_background(make_cubic_grid(3, N));
        const CPsi c = c_psi(*bg, cosine_bump(bg->grid));
        CHECK(c.skipped_nodes > 0);
        values.push_back(c.value);
    }
    MESSAGE("C[psi] " << values[0] << " " << values[1]);
    CHECK(values[0] > 0.0);
    CHECK(std::abs(values[0] - values[1]) <= 0.01 * values[1]);
}

TEST_CASE("L1 estimate between two unnormalized flows") {
    auto g = make_cubic_grid(3, 16);
    auto bg = make_flat_background(g);
    FlowConfig c = config(FlowMode::Unnormalized, 1e-4, 0.01);
    c.snapshot_every = 10;
    const TimeSeries a = run_flow(smooth_start(g, 11, 0.3), bg, c);
    const TimeSeries b = run_flow(smooth_start(g, 12, 0.3), bg, c);
    REQUIRE(a.completed);
    REQUIRE(b.completed);
    for (const ScalarField& psi : {ScalarField(g, 1.0), cosine_bump(g)}) {
        CHECK(l1_estimate_check(a, b, *bg, psi).holds());
        CHECK(l1_estimate_check(a, b, *bg, psi, L1Variable::Factor).holds());
    }
    FlowConfig n = c;
    n.mode = FlowMode::Normalized;
    const TimeSeries an = run_flow(smooth_start(g, 11, 0.3), bg, n);
    CHECK(l1_estimate_check(an, b, *bg, ScalarField(g, 1.0)).status == CheckStatus::HypothesisFailed);
}

TEST_CASE("uniform convergence probe") {
    auto g = make_cubic_grid(3, 16);
    const ScalarField u = ScalarField::from_function(g, [](auto x) { return 1.0 + 0.3 * std::sin(kTwoPi * x[1]); });
    const ScalarField eta = ScalarField::from_function(g, [](auto x) { return std::cos(kTwoPi * x[0]); });
    std::vector<ConvergencePair> pairs;
    for (int i = 1; i <= 6; ++i) pairs.push_back({u + eta * (0.2 / i), u});
    const auto good = uniform_convergence_probe(pairs, 3.0, ScalarField(g, 1.0));
    CHECK(good.report.holds());
    CHECK(good.fitted_exponent == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(good.sup_distances[5] == doctest::Approx(0.2 / 6));

    auto stalled = pairs;
    stalled[5] = stalled[4];
    CHECK(uniform_convergence_probe(stalled, 3.0, ScalarField(g, 1.0)).report.status ==
          CheckStatus::ConclusionFailed);
    CHECK(uniform_convergence_probe(pairs, 1.1, ScalarField(g, 1.0)).report.status == CheckStatus::HypothesisFailed);
}

TEST_CASE("report serialization") {
    EstimateReport r;
    r.name = "demo";
    r.status = CheckStatus::ConclusionFailed;
    r.worst_margin = -0.5;
    r.set_parameter("kappa", 2.0);
    r.notes.push_back("why");
    const auto j = nlohmann::json::parse(estimate_reports_json({r}, "abc"));
    CHECK(j["config_hash"] == "abc");
    CHECK(j["checks"][0]["status"] == "CONCLUSION_FAILED");
    CHECK(j["checks"][0]["holds"] == false);
    CHECK(j["checks"][0]["parameters"]["kappa"] == 2.0);
    const std::string table = estimate_reports_table({r}, "abc");
    CHECK(table.rfind("# config_hash=abc\n", 0) == 0);
    CHECK(table.find("note: why") != std::string::npos);
}

}  // TEST_SUITE
