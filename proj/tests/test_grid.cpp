#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include "yfl/grid.hpp"

using namespace yfl;
using yfl::test::kTwoPi;

TEST_SUITE("grid") {

TEST_CASE("grid construction and validation") {
    auto g = make_grid(3, {16, 16, 16}, {1, 1, 1});
    CHECK(g->size() == 4096);
    CHECK(g->total_volume() == doctest::Approx(1.0));

    auto g4 = make_grid(4, {8, 8, 8, 8}, {1, 2, 1, 2});
    CHECK(g4->dim == 4);
    CHECK(g4->total_volume() == doctest::Approx(4.0));

    CHECK_THROWS_WITH_AS(make_grid(2, {16, 16}, {1, 1}), doctest::Contains("dimension below 3"),
                         std::invalid_argument);
    CHECK_THROWS_AS(make_grid(3, {16, 4, 16}, {1, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(3, {16, 16, 16}, {1, 0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(3, {16, 16}, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("laplacian of constants and a Fourier eigenfunction") {
    auto g = make_grid(3, {16, 16, 16}, {1.0, 2.0, 1.5});
    CHECK(test::max_abs(laplacian_flat(ScalarField(g, 3.7))) < 1e-12);
    CHECK(test::max_abs(laplacian_flat(ScalarField(g, 3.7), DiffMode::FiniteDifference4)) < 1e-9);

    const double L1 = 1.0;
    auto f = ScalarField::from_function(g, [&](auto x) { return std::sin(kTwoPi * x[0] / L1); });
    const double k2 = std::pow(kTwoPi / L1, 2);
    CHECK(test::rel_sup_error(laplacian_flat(f), f * (-k2)) < 1e-12);
}

TEST_CASE("spectral laplacian matches the fine-grid difference oracle") {
    auto g = make_grid(3, {16, 16, 16}, {1.0, 1.0, 1.0});
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const auto p = test::TrigPoly::random(3, g->periods, seed, 3);
        const test::FineDifferenceOracle oracle{g, 4};
        const ScalarField want = oracle.second_derivative_sum([&](const std::vector<double>& x) { return p.value(x); });
        CHECK(test::rel_sup_error(laplacian_flat(p.sample(g)), want) <= 1e-6);
    }
}

TEST_CASE("grad squared: closed form and oracle") {
    auto g = make_grid(3, {16, 16, 16}, {1.0, 1.0, 1.0});
    CHECK(test::max_abs(grad_squared_flat(ScalarField(g, 2.0))) < 1e-20);
    auto f = ScalarField::from_function(g, [](auto x) { return std::sin(kTwoPi * x[0]); });
    auto want = ScalarField::from_function(g, [](auto x) { return kTwoPi * kTwoPi * std::pow(std::cos(kTwoPi * x[0]), 2); });
    CHECK(test::rel_sup_error(grad_squared_flat(f), want) < 1e-12);

    const auto p = test::TrigPoly::random(3, g->periods, 11, 3);
    const test::FineDifferenceOracle oracle{g, 4};
    ScalarField sq(g, 0.0);
    for (int a = 0; a < 3; ++a) {
        ScalarField d = oracle.first_derivative([&](const std::vector<double>& x) { return p.value(x); }, a);
        sq += d * d;
    }
    CHECK(test::rel_sup_error(grad_squared_flat(p.sample(g)), sq) <= 1e-6);
}

TEST_CASE("integration") {
    auto g = make_cubic_grid(3, 16);
    CHECK(integrate(ScalarField(g, 1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    auto s = ScalarField::from_function(g, [](auto x) { return std::sin(kTwoPi * x[0]); });
    CHECK(std::abs(integrate(s)) < 1e-15);

    auto cc = [](std::span<const double> x) {
        return std::pow(std::cos(kTwoPi * x[0]), 2) * std::pow(std::cos(kTwoPi * x[1]), 2);
    };
    const double coarse = integrate(ScalarField::from_function(g, cc));
    const double fine = integrate(ScalarField::from_function(make_cubic_grid(3, 64), cc));
    CHECK(coarse == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(std::abs(coarse - fine) < 1e-13);

    ScalarField w(g, 1.0);
    w[5] = 0.0;
    CHECK_THROWS_AS(integrate(s, w), std::invalid_argument);
}

TEST_CASE("divergence theorem and integration by parts") {
    auto g = make_grid(3, {16, 16, 16}, {1.0, 1.3, 0.8});
    const auto pf = test::TrigPoly::random(3, g->periods, 5, 3, 5, 0.5);
    const auto pg = test::TrigPoly::random(3, g->periods, 6, 3, 5, -0.2);
    const ScalarField f = pf.sample(g);
    const ScalarField h = pg.sample(g) + f * f;
    const double vol = g->total_volume();
    CHECK(std::abs(integrate(laplacian_flat(f))) <= 1e-10 * test::max_abs(f) * vol);
    CHECK(std::abs(integrate(laplacian_flat(f, DiffMode::FiniteDifference4))) <= 1e-10 * test::max_abs(f) * vol);

    const double lhs = integrate(f * laplacian_flat(h));
    const double rhs = -integrate(grad_dot_flat(f, h));
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(rhs));
}

TEST_CASE("fourth-order finite differences converge to the spectral laplacian") {
    auto field = [](std::span<const double> x) {
        return std::exp(0.4 * std::sin(kTwoPi * x[0])) * (1.0 + 0.3 * std::cos(kTwoPi * (x[1] + x[2])));
    };
    std::vector<double> err;
    for (std::size_t N : {16u, 32u}) {
        auto g = make_cubic_grid(3, N);
        auto f = ScalarField::from_function(g, field);
        err.push_back(test::max_abs(laplacian_flat(f, DiffMode::FiniteDifference4) - laplacian_flat(f)));
    }
    const double order = std::log2(err[0] / err[1]);
    MESSAGE("FD4 order " << order);
    CHECK(order >= 3.5);
}

TEST_CASE("field metrics") {
    auto g = make_cubic_grid(3, 16);
    const auto p = test::TrigPoly::random(3, g->periods, 3, 2, 4, 2.0);
    const ScalarField f = p.sample(g);
    const auto zero = field_metrics(f, f, 6.0);
    CHECK(zero.sup == 0.0);
    CHECK(zero.l1 == 0.0);
    CHECK(zero.lp == 0.0);

    ScalarField shifted = f;
    shifted += -0.25;
    const auto d = field_metrics(f, shifted, 6.0);
    CHECK(d.sup == doctest::Approx(0.25));
    CHECK(d.l1 == doctest::Approx(0.25 * g->total_volume()));
    CHECK(d.lp == doctest::Approx(0.25));

    CHECK_THROWS(field_metrics(f, ScalarField(make_cubic_grid(3, 8), 1.0), 2.0));
}

TEST_CASE("pairwise sums are bit-stable and accurate") {
    std::vector<double> v(10001);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + static_cast<double>(i));
    const double a = pairwise_sum(v);
    const double b = pairwise_sum(v);
    CHECK(a == b);
    long double ref = 0.0L;
    for (double x : v) ref += x;
    CHECK(std::abs(a - static_cast<double>(ref)) < 1e-13);
}

}  // TEST_SUITE
