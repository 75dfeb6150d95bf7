#include <cmath>

#include "doctest.h"
#include "support.hpp"
#include "yfl/flow.hpp"

using namespace yfl;
using yfl::test::kTwoPi;

namespace {

ScalarField sine_factor(const GridPtr& g, double eps) {
    return ScalarField::from_function(g, [=](auto x) { return 1.0 + eps * std::sin(kTwoPi * x[0]); });
}

FlowConfig config(FlowMode mode, double dt, double T, Stepper s = Stepper::SemiImplicit) {
    FlowConfig c;
    c.mode = mode;
    c.dt = dt;
    c.horizon = T;
    c.stepper = s;
    return c;
}

}  // namespace

TEST_SUITE("flow") {

TEST_CASE("config validation and parsing") {
    CHECK_THROWS_AS(config(FlowMode::Normalized, 0.0, 1.0).validate(), std::invalid_argument);
    CHECK_THROWS_AS(config(FlowMode::Normalized, 1.0, 1.0).validate(), std::invalid_argument);
    FlowConfig c = config(FlowMode::Normalized, 0.3, 1.0);
    CHECK(c.step_count() == 4);
    CHECK(c.effective_dt() == doctest::Approx(0.25));
    c.monitor_stride = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    CHECK(parse_stepper("rk4") == Stepper::ExplicitRK4);
    CHECK(parse_flow_mode("unnormalized") == FlowMode::Unnormalized);
    CHECK_THROWS_AS(parse_stepper("euler"), std::invalid_argument);
}

TEST_CASE("constant factors are fixed points") {
    auto g = make_cubic_grid(3, 8);
    auto bg = make_flat_background(g);
    for (Stepper s : {Stepper::ExplicitRK4, Stepper::SemiImplicit}) {
        const TimeSeries ts = run_flow(ScalarField(g, 1.7), bg, config(FlowMode::Normalized, 1e-3, 0.05, s));
        REQUIRE(ts.completed);
        CHECK(test::max_abs(ts.final_u - ScalarField(g, 1.7)) < 1e-13);
    }
}

TEST_CASE("right-hand side identities") {
    auto g = make_cubic_grid(3, 16);
    auto bg = make_synthetic_background(
        ScalarField::from_function(g, [](auto x) { return 1.0 + 0.5 * std::cos(kTwoPi * x[2]); }));
    const ScalarField u = test::TrigPoly::random(3, g->periods, 8, 2, 5, 5.0).sample(g);
    const ConformalMetric m(bg, u);
    const MetricSummary s = summarize(m);
    // d/dt Vol = 6 int u^5 du/dt dvol0, zero in the normalized flow.
    const ScalarField u5 = power(u, 5.0);
    const double dvol = 6.0 * integrate(u5 * rhs_normalized(m, s.r));
    CHECK(std::abs(dvol) <= 1e-10 * integrate(u5 * map(rhs_normalized(m, s.r), [](double v) { return std::abs(v); })));
    // Unnormalized: d/dt Vol = -(n/2) int R dvol.
    CHECK(6.0 * integrate(u5 * rhs_unnormalized(m)) == doctest::Approx(-1.5 * s.total_scalar).epsilon(1e-10));
    // Pointwise definition.
    const ScalarField want = s.R * u * (-0.25);
    CHECK(test::rel_sup_error(rhs_unnormalized(m), want) < 1e-13);
}

TEST_CASE("explicit RK4 converges at fourth order") {
    auto g = make_cubic_grid(3, 8);
    auto bg = make_flat_background(g);
    const ScalarField u0 = sine_factor(g, 0.2);
    const double limit = rk4_stability_limit(*bg, u0);
    REQUIRE(limit > 0.0);
    // Coarsest step sits at half the stability limit.
    const double T = 8.0 * 0.5 * limit * 4.0;
    auto final_u = [&](std::size_t steps) {
        const TimeSeries ts = run_flow(u0, bg, config(FlowMode::Normalized, T / steps, T, Stepper::ExplicitRK4));
        REQUIRE(ts.completed);
        return ts.final_u;
    };
    const ScalarField ref = final_u(512);
    const double e1 = test::max_abs(final_u(32) - ref);
    const double e2 = test::max_abs(final_u(64) - ref);
    const double order = std::log2(e1 / e2);
    MESSAGE("RK4 errors " << e1 << " " << e2 << " order " << order);
    CHECK(order >= 3.5);
}

TEST_CASE("semi-implicit and explicit steppers agree") {
    auto g = make_cubic_grid(3, 8);
    auto bg = make_flat_background(g);
    const ScalarField u0 = sine_factor(g, 0.2);
    const double dt = 0.25 * rk4_stability_limit(*bg, u0);
    const double T = 40 * dt;
    const TimeSeries a = run_flow(u0, bg, config(FlowMode::Normalized, dt, T, Stepper::ExplicitRK4));
    const TimeSeries b = run_flow(u0, bg, config(FlowMode::Normalized, dt, T, Stepper::SemiImplicit));
    CHECK(test::max_abs(a.final_u - b.final_u) < 1e-6);
}

TEST_CASE("normalized flow: volume, r and the dissipation identity") {
    auto g = make_cubic_grid(3, 16);
    auto bg = make_flat_background(g);
    const TimeSeries ts = run_flow(sine_factor(g, 0.3), bg, config(FlowMode::Normalized, 1e-4, 0.02));
    REQUIRE(ts.completed);
    REQUIRE(ts.samples.size() == 201);
    const double v0 = ts.samples.front().volume;
    for (std::size_t k = 0; k < ts.samples.size(); ++k) {
        CHECK(std::abs(ts.samples[k].volume - v0) / v0 <= 1e-6);
        if (k > 0) CHECK(ts.samples[k].r <= ts.samples[k - 1].r + 1e-10);
    }
    // dr/dt = -((n-2)/2) Vol^{-1} int (R - r)^2 dvol.
    CHECK(dr_dt_residual(ts) <= 1e-2);
}

TEST_CASE("unnormalized flow: total scalar dissipation") {
    auto g = make_cubic_grid(3, 16);
    auto bg = make_flat_background(g);
    const TimeSeries ts = run_flow(sine_factor(g, 0.3), bg, config(FlowMode::Unnormalized, 2.5e-5, 0.005));
    REQUIRE(ts.completed);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < ts.samples.size(); ++k) {
        const auto& a = ts.samples[k - 1];
        const auto& b = ts.samples[k + 1];
        const double d = (b.total_scalar - a.total_scalar) / (b.t - a.t);
        const double want = -0.5 * ts.samples[k].int_R2;
        worst = std::max(worst, std::abs(d - want) / std::abs(want));
        CHECK(b.total_scalar <= a.total_scalar + 1e-10);
    }
    MESSAGE("worst dissipation mismatch " << worst);
    CHECK(worst <= 1e-3);
}

TEST_CASE("scalar curvature evolution identity") {
    auto g = make_cubic_grid(3, 16);
    auto bg = make_flat_background(g);
    // Central differences in time resolve only gentle runs at these steps: the
    // truncation term (dt^2/6) d^3R/dt^3 grows with the harmonics the
    // nonlinearity feeds, so the amplitude stays small.
    const ScalarField u0 = ScalarField::from_function(g, [](auto x) {
        return 1.0 + 0.005 * (std::sin(kTwoPi * x[0]) + std::cos(kTwoPi * x[1]) + 0.5 * std::sin(kTwoPi * x[2] + 1.0));
    });
    std::vector<double> res;
    for (double dt : {1e-4, 5e-5}) {
        FlowConfig c = config(FlowMode::Normalized, dt, 0.004);
        c.snapshot_every = 1;
        const TimeSeries ts = run_flow(u0, bg, c);
        REQUIRE(ts.completed);
        res.push_back(scalar_evolution_residual(ts, bg));
    }
    MESSAGE("residuals " << res[0] << " " << res[1]);
    CHECK(res[0] <= 5e-3);
    CHECK(res[0] >= 3.0 * res[1]);

    const TimeSeries still = run_flow(ScalarField(g, 1.0), bg, [] {
        FlowConfig c = config(FlowMode::Normalized, 1e-4, 1e-3);
        c.snapshot_every = 1;
        return c;
    }());
    CHECK(scalar_evolution_residual(still, bg) == 0.0);

    FlowConfig sparse = config(FlowMode::Normalized, 1e-4, 1e-3);
    CHECK_THROWS_AS(scalar_evolution_residual(run_flow(u0, bg, sparse), bg), std::invalid_argument);
}

TEST_CASE("the two evolution right-hand sides differ by r R") {
    auto g = make_cubic_grid(3, 16);
    auto bg = make_synthetic_background(ScalarField(g, 2.0));
    const ConformalMetric m(bg, sine_factor(g, 0.3));
    const ScalarField diff = scalar_evolution_rhs(m, FlowMode::Unnormalized) - scalar_evolution_rhs(m, FlowMode::Normalized);
    const ScalarField want = scalar_curvature(m) * mean_scalar(m);
    CHECK(test::max_abs(diff - want) <= 1e-10 * test::max_abs(want));
}

TEST_CASE("runs are deterministic") {
    auto g = make_cubic_grid(3, 8);
    auto bg = make_flat_background(g);
    FlowConfig c = config(FlowMode::Normalized, 1e-4, 0.005);
    c.snapshot_times = {0.0025};
    const TimeSeries a = run_flow(sine_factor(g, 0.3), bg, c);
    const TimeSeries b = run_flow(sine_factor(g, 0.3), bg, c);
    CHECK(a.final_u.data() == b.final_u.data());
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t k = 0; k < a.samples.size(); ++k) CHECK(a.samples[k].r == b.samples[k].r);
    REQUIRE(a.snapshot_near(0.0025) != nullptr);
    CHECK(a.snapshot_near(0.0025)->t == doctest::Approx(0.0025));
}

TEST_CASE("single steps match the integrator") {
    auto g = make_cubic_grid(3, 8);
    auto bg = make_flat_background(g);
    const FlowConfig c = config(FlowMode::Normalized, 1e-4, 3e-4, Stepper::ExplicitRK4);
    FlowState s = make_state(bg, sine_factor(g, 0.3));
    for (int k = 0; k < 3; ++k) s = step(s, bg, c);
    CHECK(s.step == 3);
    CHECK(s.t == doctest::Approx(3e-4));
    CHECK(test::max_abs(s.u - run_flow(sine_factor(g, 0.3), bg, c).final_u) < 1e-14);
}

TEST_CASE("unstable explicit steps abort cleanly") {
    auto g = make_cubic_grid(3, 16);
    auto bg = make_flat_background(g);
    const ScalarField u0 = sine_factor(g, 0.6);
    const double dt = 50.0 * rk4_stability_limit(*bg, u0);
    const TimeSeries ts = run_flow(u0, bg, config(FlowMode::Normalized, dt, 50 * dt, Stepper::ExplicitRK4));
    CHECK_FALSE(ts.completed);
    CHECK_FALSE(ts.abort_reason.empty());
    CHECK_FALSE(ts.samples.empty());
}

}  // TEST_SUITE
