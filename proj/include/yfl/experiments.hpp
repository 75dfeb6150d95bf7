#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "yfl/estimates.hpp"
#include "yfl/flow.hpp"

namespace yfl {

enum class SequenceFamily { C0Convergent, LpOnly, L1WithBounds };

const char* to_string(SequenceFamily f);
SequenceFamily parse_family(const std::string& s);

struct BackgroundSpec {
    int dim = 3;
    std::vector<std::size_t> nodes{16, 16, 16};
    std::vector<double> periods{1.0, 1.0, 1.0};
    BackgroundKind kind = BackgroundKind::Flat;
    std::string phi = "1";
    std::string R0 = "0";
    DiffMode diff = DiffMode::Spectral;

    BackgroundPtr build() const;
};

struct ExperimentSpec {
    BackgroundSpec background;
    /// Limit conformal factor u as a field expression.
    std::string limit = "1";
    SequenceFamily family = SequenceFamily::C0Convergent;
    std::size_t N = 8;
    /// C0 family: a_i = amplitude / i^amplitude_power (default 1). LP family:
    /// bump height (default 1). L1 family: oscillation amplitude (default 0.3).
    std::optional<double> amplitude;
    double amplitude_power = 1.0;
    /// LP family: bump radius r_i = radius / i, fixed height 1.
    double radius = 0.5;
    /// Empty means AUTO (max_i total_scalar(g_i)).
    std::optional<double> kappa;
    /// Empty means AUTO (min over i and nodes of R(g_i)); positive mode only.
    std::optional<std::string> delta;
    double C0 = 3.0;
    FlowConfig flow;
    std::uint64_t seed = 1;
    /// Sup distances at t* must strictly decrease from this member index on (1-based).
    std::size_t decrease_from = 3;
    std::size_t threads = 0;
    Tolerance tol;
    /// Relative tolerance for the t -> 0 continuity of the total scalar curvature.
    double continuity_tol = 1e-4;
    /// Volume drift allowed for normalized member flows.
    double volume_tol = 1e-6;
    /// Monotonicity slack, relative to max(1, |value|).
    double monotone_slack = 1e-10;
};

/// Builds u_1..u_N and validates them independently of the construction
/// (positivity, [1/C0, C0] for the L1 family, resolvability of oscillations).
///
///   c0          u + (amplitude / i^amplitude_power) eta, eta = c0_direction
///   lp-only     u + amplitude * bump(radius / i), centre at a seeded node
///   l1-bounded  u (1 + amplitude sin(2 pi (2i-1) x1 / L1) / sqrt(i)), clipped to [1/C0, C0]
std::vector<ScalarField> generate_sequence(const ExperimentSpec& spec, const GridPtr& grid);

/// Smooth bump exp(1 - 1/(1 - s^2)) for s = d/radius < 1, d the periodic
/// (minimum-image) distance to `center`; height 1 at the centre.
ScalarField periodic_bump(const GridPtr& grid, const std::vector<double>& center, double radius);

/// Deterministic smooth nonnegative perturbation with unit sup norm used by
/// the C0 family, so u + a eta stays positive for every a >= 0.
ScalarField c0_direction(const GridPtr& grid, std::uint64_t seed);

struct MemberResult {
    std::size_t index = 0;
    double total_scalar0 = 0.0;
    double sup0 = 0.0;
    double l1_0 = 0.0;
    double lp0 = 0.0;
    double sup_tstar = 0.0;
    bool flow_completed = false;
    std::string abort_reason;
    std::vector<std::string> invariant_failures;
    std::vector<EstimateReport> checks;
    TimeSeries series;
};

struct ContinuityProbe {
    double sample_time = 0.0;
    double sample_rel_err = 0.0;
    double probe_step = 0.0;
    double probe_rel_err = 0.0;
    bool ok = false;
};

struct ClosednessReport {
    ExperimentSpec spec;
    std::string label;
    bool operator_level = false;
    double t_star = 0.0;
    double limit_total = 0.0;
    double kappa = 0.0;
    bool kappa_auto = false;
    double margin = 0.0;
    std::optional<double> delta_min;
    std::optional<double> sigma;
    MemberResult limit;
    std::vector<MemberResult> members;
    ContinuityProbe continuity;
    std::optional<ConvergenceProbe> convergence;
    bool pass = false;
    /// 0 pass, 1 conclusion failure, 2 hypothesis failure, 3 numerical abort.
    int exit_code = 0;
    std::vector<std::string> failures;

    std::vector<double> sup_tstar() const;
    std::vector<double> sup_initial() const;
};

/// Default amplitude of a family when the spec leaves it unset.
double default_amplitude(SequenceFamily f);

ClosednessReport run_closedness_experiment(const ExperimentSpec& spec);

/// Writes report.json, distances.csv, runs/member_XX.csv (and runs/limit.csv)
/// and plots/*.svg under `dir`. Output is a pure function of the report.
void emit_report(const std::filesystem::path& dir, const ClosednessReport& report, const std::string& config_hash);

std::string report_json(const ClosednessReport& report, const std::string& config_hash);

}  // namespace yfl
