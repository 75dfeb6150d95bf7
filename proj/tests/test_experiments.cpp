#include <cmath>
#include <filesystem>

#include "doctest.h"
#include "json.hpp"
#include "support.hpp"
#include "yfl/experiments.hpp"
#include "yfl/expr.hpp"
#include "yfl/field_io.hpp"

using namespace yfl;
using yfl::test::kTwoPi;

namespace {

/// int_{|x| < r} bump^p dx in R^3, by composite Simpson in the radial variable.
double bump_power_integral(double r, double p) {
    const int m = 20000;
    const double h = 1.0 / m;
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
        const double x = k * h;
        const double f = x < 1.0 ? x * x * std::exp(p * (1.0 - 1.0 / (1.0 - x * x))) : 0.0;
        s += f * (k == 0 || k == m ? 1.0 : (k % 2 ? 4.0 : 2.0));
    }
    return 4.0 * std::numbers::pi * r * r * r * s * h / 3.0;
}

ExperimentSpec small_spec(SequenceFamily family) {
    ExperimentSpec s;
    s.background.nodes = {8, 8, 8};
    s.family = family;
    s.N = 3;
    s.flow.dt = 1e-4;
    s.flow.horizon = 0.004;
    s.limit = "1 + 0.2*sin(2*pi*x2)";
    return s;
}

std::filesystem::path scratch(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("yfl_exp_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("shrinking bumps against the radial oracle") {
    auto g = make_cubic_grid(3, 32);
    const ScalarField zero(g, 0.0);
    for (double r : {0.45, 0.35, 0.25}) {
        const ScalarField b = periodic_bump(g, {0.5, 0.5, 0.5}, r);
        const FieldDistances d = field_metrics(b, zero, 6.0);
        CHECK(d.sup == doctest::Approx(1.0));
        const double want = std::pow(bump_power_integral(r, 6.0), 1.0 / 6.0);
        MESSAGE("r=" << r << " lp=" << d.lp << " oracle=" << want);
        CHECK(std::abs(d.lp - want) <= 0.05 * want);
    }
    CHECK_THROWS_AS(periodic_bump(g, {0.5, 0.5}, 0.2), std::invalid_argument);
}

TEST_CASE("sequence postconditions") {
    auto g = make_cubic_grid(3, 16);
    const ScalarField u = sample_expression(g, "1 + 0.2*sin(2*pi*x2)");

    ExperimentSpec c0 = small_spec(SequenceFamily::C0Convergent);
    c0.N = 5;
    const auto s0 = generate_sequence(c0, g);
    REQUIRE(s0.size() == 5);
    for (std::size_t i = 0; i < s0.size(); ++i) {
        CHECK(s0[i].min() > 0.0);
        CHECK(field_metrics(s0[i], u, 1.0).sup == doctest::Approx(1.0 / (i + 1)));
    }
    const ScalarField eta = c0_direction(g, 1);
    CHECK(eta.min() >= 0.0);
    CHECK(eta.max() == doctest::Approx(1.0));

    ExperimentSpec lp = small_spec(SequenceFamily::LpOnly);
    lp.N = 5;
    const auto s1 = generate_sequence(lp, g);
    double prev = 1e300;
    for (const auto& f : s1) {
        const FieldDistances d = field_metrics(f, u, 6.0);
        CHECK(d.sup >= 0.99);
        CHECK(d.lp < prev);
        prev = d.lp;
    }

    ExperimentSpec l1 = small_spec(SequenceFamily::L1WithBounds);
    l1.N = 4;
    const auto s2 = generate_sequence(l1, g);
    prev = 1e300;
    for (const auto& f : s2) {
        CHECK(f.min() >= 1.0 / l1.C0);
        CHECK(f.max() <= l1.C0);
        const double d = field_metrics(f, u, 1.0).l1;
        CHECK(d < prev);
        prev = d;
    }
    // Member 5 needs frequency 9, past the Nyquist limit of 16 nodes.
    l1.N = 5;
    CHECK_THROWS_AS(generate_sequence(l1, g), std::invalid_argument);

    ExperimentSpec none = small_spec(SequenceFamily::C0Convergent);
    none.N = 0;
    CHECK(generate_sequence(none, g).empty());
    none.limit = "-1";
    CHECK_THROWS_AS(generate_sequence(none, g), std::invalid_argument);
}

TEST_CASE("trivial sequence and empty sequence") {
    ExperimentSpec s = small_spec(SequenceFamily::C0Convergent);
    s.amplitude = 0.0;
    const ClosednessReport r = run_closedness_experiment(s);
    CHECK(r.pass);
    CHECK(r.kappa == doctest::Approx(r.limit_total));
    for (const auto& m : r.members) CHECK(m.sup0 == 0.0);

    ExperimentSpec e = small_spec(SequenceFamily::C0Convergent);
    e.N = 0;
    const ClosednessReport re = run_closedness_experiment(e);
    CHECK(re.members.empty());
    CHECK(re.kappa == doctest::Approx(re.limit_total));
    CHECK(re.exit_code != 3);
}

TEST_CASE("C0 experiment on a small grid") {
    ExperimentSpec s = small_spec(SequenceFamily::C0Convergent);
    s.N = 4;
    s.decrease_from = 1;
    const ClosednessReport r = run_closedness_experiment(s);
    for (const auto& f : r.failures) MESSAGE(f);
    CHECK(r.pass);
    CHECK(r.exit_code == 0);
    CHECK(r.kappa_auto);
    CHECK(r.limit_total <= r.kappa + 1e-6);
    CHECK(r.continuity.ok);
    CHECK(r.t_star == doctest::Approx(0.002));
    const auto sup = r.sup_tstar();
    for (std::size_t i = 1; i < sup.size(); ++i) CHECK(sup[i] < sup[i - 1]);
    CHECK(!r.operator_level);

    // kappa below the members' totals is a hypothesis failure.
    s.kappa = r.limit_total - 100.0;
    const ClosednessReport bad = run_closedness_experiment(s);
    CHECK(bad.exit_code == 2);
    CHECK(!bad.pass);
}

TEST_CASE("report emission is deterministic and follows the schema") {
    ExperimentSpec s = small_spec(SequenceFamily::C0Convergent);
    s.background.kind = BackgroundKind::Synthetic;
    s.background.R0 = "-1";
    const ClosednessReport r = run_closedness_experiment(s);
    const auto a = scratch("a"), b = scratch("b");
    emit_report(a, r, "cafe");
    emit_report(b, r, "cafe");
    std::size_t files = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        ++files;
        const auto rel = std::filesystem::relative(e.path(), a);
        CHECK(read_text_file(e.path()) == read_text_file(b / rel));
    }
    CHECK(files >= 5);
    CHECK(std::filesystem::exists(a / "report.json"));
    CHECK(std::filesystem::exists(a / "distances.csv"));
    CHECK(std::filesystem::exists(a / "runs" / "member_01.csv"));

    const auto j = nlohmann::json::parse(read_text_file(a / "report.json"));
    for (const char* key : {"schema", "config_hash", "label", "operator_level", "family", "N", "seed", "limit_expr",
                            "background", "flow", "t_star", "limit_total", "kappa", "kappa_auto", "margin",
                            "limit", "members", "continuity", "pass", "exit_code", "failures"}) {
        CHECK_MESSAGE(j.contains(key), key);
    }
    CHECK(j["config_hash"] == "cafe");
    CHECK(j["operator_level"] == true);
    CHECK(j["label"].get<std::string>().rfind("operator-level", 0) == 0);
    CHECK(j["members"].size() == 3);
    CHECK(read_text_file(a / "distances.csv").find("config_hash=cafe") != std::string::npos);
}

}  // TEST_SUITE
