#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "yfl/conformal.hpp"

namespace yfl {

enum class FlowMode { Normalized, Unnormalized };
enum class Stepper { ExplicitRK4, SemiImplicit };

const char* to_string(FlowMode mode);
const char* to_string(Stepper stepper);
FlowMode parse_flow_mode(const std::string& s);
Stepper parse_stepper(const std::string& s);

struct FlowConfig {
    FlowMode mode = FlowMode::Normalized;
    double dt = 1e-4;
    double horizon = 0.5;
    Stepper stepper = Stepper::SemiImplicit;
    /// Steps between monitor samples.
    std::size_t monitor_stride = 1;
    bool dealias = false;
    /// Keep u at every k-th monitor sample (0: none).
    std::size_t snapshot_every = 0;
    /// Keep u at the monitor samples closest to these times.
    std::vector<double> snapshot_times;

    /// Throws std::invalid_argument on nonpositive dt/horizon, dt >= horizon or zero stride.
    void validate() const;
    std::size_t step_count() const;
    double effective_dt() const;
};

/// Largest explicit RK4 step the linearized fast-diffusion operator allows on
/// this grid for the given conformal factor.
double rk4_stability_limit(const Background& bg, const ScalarField& u);

struct FlowState {
    double t = 0.0;
    std::size_t step = 0;
    ScalarField u;
    ScalarField R;
    double r = 0.0;
    double volume = 0.0;
    double total_scalar = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    double inf_R = 0.0;
};

FlowState make_state(const BackgroundPtr& bg, ScalarField u, double t = 0.0, std::size_t step = 0);

struct MonitorSample {
    std::size_t step = 0;
    double t = 0.0;
    double volume = 0.0;
    double r = 0.0;
    double total_scalar = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
    double inf_R = 0.0;
    double sup_R = 0.0;
    /// int R^2 dvol_g
    double int_R2 = 0.0;
    /// int (R - r)^2 dvol_g
    double int_dev2 = 0.0;
};

struct Snapshot {
    std::size_t sample = 0;
    double t = 0.0;
    ScalarField u;
};

struct TimeSeries {
    FlowConfig config;
    int dim = 3;
    BackgroundKind kind = BackgroundKind::Flat;
    double R0_min = 0.0;
    double R0_max = 0.0;
    double background_volume = 0.0;
    std::vector<MonitorSample> samples;
    std::vector<Snapshot> snapshots;
    std::vector<std::string> warnings;
    bool completed = false;
    std::string abort_reason;
    ScalarField final_u;

    /// Snapshot for monitor sample `k`, if kept.
    const Snapshot* snapshot_at_sample(std::size_t k) const;
    /// Snapshot with time closest to `t`.
    const Snapshot* snapshot_near(double t) const;
};

/// Thrown when a state falls below the positivity floor or stops being finite.
class FlowAbort : public std::runtime_error {
public:
    FlowAbort(const std::string& what, double t, std::size_t node)
        : std::runtime_error(what), t_(t), node_(node) {}
    double time() const { return t_; }
    std::size_t node() const { return node_; }

private:
    double t_;
    std::size_t node_;
};

/// d/dt u = -((n-2)/4)(R - r) u.
ScalarField rhs_normalized(const ConformalMetric& m, double r);
/// d/dt u = -((n-2)/4) R u.
ScalarField rhs_unnormalized(const ConformalMetric& m);

/// Advances one step of size cfg.dt (the horizon is ignored). Stateless form:
/// the semi-implicit stabilization constant is estimated from `state`.
FlowState step(const FlowState& state, const BackgroundPtr& bg, const FlowConfig& cfg);

/// Integrates on [0, horizon]. Numerical aborts are recorded in the series
/// (completed = false) with the samples gathered so far.
TimeSeries run_flow(const ScalarField& u0, const BackgroundPtr& bg, const FlowConfig& cfg);

/// Right-hand side of the scalar-curvature evolution:
/// (n-1) Delta_g R + R (R - r) for Normalized, (n-1) Delta_g R + R^2 otherwise.
ScalarField scalar_evolution_rhs(const ConformalMetric& m, FlowMode mode);

/// Sup-norm residual of central-difference dR/dt against
/// (n-1) Delta_g R + R (R - r), normalized by sup|R| + 1. The maximum over
/// every run of three consecutive snapshots is returned. `cross_mode`
/// evaluates the right-hand side of the other flow variant.
double scalar_evolution_residual(const TimeSeries& series, const BackgroundPtr& bg,
                                 std::optional<FlowMode> cross_mode = std::nullopt);

/// Largest relative mismatch between central-difference dr/dt and
/// -((n-2)/2) Vol^{-1} int (R - r)^2 dvol over interior samples.
double dr_dt_residual(const TimeSeries& series);

/// Central-difference derivative of r at every interior sample.
std::vector<double> dr_dt_samples(const TimeSeries& series);

}  // namespace yfl
