#include "yfl/flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "yfl/field_io.hpp"
#include "yfl/spectral.hpp"

namespace yfl {

const char* to_string(FlowMode mode) {
    return mode == FlowMode::Normalized ? "normalized" : "unnormalized";
}

const char* to_string(Stepper stepper) {
    return stepper == Stepper::ExplicitRK4 ? "explicit-rk4" : "semi-implicit";
}

FlowMode parse_flow_mode(const std::string& s) {
    if (s == "normalized" || s == "NORMALIZED") return FlowMode::Normalized;
    if (s == "unnormalized" || s == "UNNORMALIZED") return FlowMode::Unnormalized;
    throw std::invalid_argument("unknown flow mode '" + s + "'");
}

Stepper parse_stepper(const std::string& s) {
    if (s == "explicit-rk4" || s == "rk4" || s == "EXPLICIT_RK4") return Stepper::ExplicitRK4;
    if (s == "semi-implicit" || s == "etdrk4" || s == "SEMI_IMPLICIT") return Stepper::SemiImplicit;
    throw std::invalid_argument("unknown stepper '" + s + "'");
}

void FlowConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon))
        throw std::invalid_argument("horizon must be positive");
    if (!(dt < horizon)) throw std::invalid_argument("dt must be smaller than the horizon");
    if (monitor_stride == 0) throw std::invalid_argument("monitor stride must be positive");
}

std::size_t FlowConfig::step_count() const {
    return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

double FlowConfig::effective_dt() const { return horizon / static_cast<double>(step_count()); }

namespace {

/// max over nodes of (n-1) u^{-4/(n-2)} phi^{-4/(n-2)}: the diffusion
/// coefficient of the linearized equation for w = u^{(n+2)/(n-2)}.
double max_diffusivity(const Background& bg, const ScalarField& u) {
    const int n = bg.dim();
    const double q = -4.0 / (n - 2);
    const ScalarField metric = bg.inverse_metric_factor();
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, power(u[i], q) * metric[i]);
    return (n - 1) * d;
}

double spectral_radius_factor(const Background& bg) {
    const double per_axis = bg.diff == DiffMode::Spectral ? std::numbers::pi * std::numbers::pi : 16.0 / 3.0;
    double s = 0.0;
    for (int a = 0; a < bg.dim(); ++a) {
        const double h = bg.grid->spacing(a);
        s += per_axis / (h * h);
    }
    return s;
}

void check_positive(const ScalarField& u, double t) {
    std::size_t bad = u.size();
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!std::isfinite(u[i]) || !(u[i] > kPositivityFloor)) {
            bad = i;
            break;
        }
    }
    if (bad == u.size()) return;
    std::ostringstream os;
    const auto x = node_coordinates(u.grid(), bad);
    os << "positivity floor breached at t=" << format_double(t) << ", node " << bad << " (x=";
    for (std::size_t a = 0; a < x.size(); ++a) os << (a ? "," : "") << format_double(x[a]);
    os << "), u=" << format_double(u[bad]);
    throw FlowAbort(os.str(), t, bad);
}

ScalarField flow_rhs(const BackgroundPtr& bg, const ScalarField& u, FlowMode mode) {
    const ConformalMetric m(bg, u);
    if (mode == FlowMode::Unnormalized) return rhs_unnormalized(m);
    return rhs_normalized(m, mean_scalar(m));
}

// phi_1, phi_2, phi_3 of the exponential integrators.
void phi_functions(double z, double& p1, double& p2, double& p3) {
    if (std::abs(z) < 1.0) {
        // Taylor series: phi_k(z) = sum_j z^j / (j+k)!
        double term1 = 1.0, term2 = 0.5, term3 = 1.0 / 6.0;
        p1 = p2 = p3 = 0.0;
        for (int j = 0; j < 30; ++j) {
            p1 += term1;
            p2 += term2;
            p3 += term3;
            term1 *= z / (j + 2);
            term2 *= z / (j + 3);
            term3 *= z / (j + 4);
        }
        return;
    }
    const double ez = std::exp(z);
    p1 = (ez - 1.0) / z;
    p2 = (ez - 1.0 - z) / (z * z);
    p3 = (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
}

/// Fourth-order exponential time differencing (Cox-Matthews) on
/// w = u^{(n+2)/(n-2)}, with the stabilizing operator A * Delta_flat treated
/// exactly and everything else explicitly.
class EtdStepper {
public:
    EtdStepper(BackgroundPtr bg, FlowMode mode, double dt, bool dealias)
        : bg_(std::move(bg)), mode_(mode), dt_(dt), dealias_(dealias),
          plan_(spectral_plan(*bg_->grid)) {
        const int n = bg_->dim();
        to_u_ = (n - 2.0) / (n + 2.0);
        to_w_ = (n + 2.0) / (n - 2.0);
        const std::size_t ns = plan_->spectral_size();
        E_.resize(ns);
        E2_.resize(ns);
        Q_.resize(ns);
        f1_.resize(ns);
        f2_.resize(ns);
        f3_.resize(ns);
    }

    double stabilization() const { return A_; }

    void set_stabilization(double A) {
        A_ = A;
        const auto& k2 = plan_->k_squared();
        for (std::size_t i = 0; i < k2.size(); ++i) {
            const double z = -A * k2[i] * dt_;
            double p1, p2, p3, h1, h2, h3;
            phi_functions(z, p1, p2, p3);
            phi_functions(0.5 * z, h1, h2, h3);
            E_[i] = std::exp(z);
            E2_[i] = std::exp(0.5 * z);
            Q_[i] = 0.5 * dt_ * h1;
            f1_[i] = dt_ * (p1 - 3.0 * p2 + 4.0 * p3);
            f2_[i] = dt_ * (p2 - 2.0 * p3);
            f3_[i] = dt_ * (-p2 + 4.0 * p3);
        }
    }

    /// Re-estimates A when it is stale or too small for the current state.
    void refresh(const ScalarField& u, bool force) {
        const double d = max_diffusivity(*bg_, u);
        if (force || d > A_) set_stabilization(1.25 * d);
    }

    ScalarField advance(const ScalarField& u, double t) {
        const std::size_t ns = plan_->spectral_size();
        ScalarField w = power(u, to_w_);
        std::vector<Complex> v(ns), Nv(ns), a(ns), Na(ns), b(ns), Nb(ns), c(ns), Nc(ns);
        plan_->forward(w.values(), v);
        filter(v);
        nonlinear(u, v, Nv);

        for (std::size_t i = 0; i < ns; ++i) a[i] = E2_[i] * v[i] + Q_[i] * Nv[i];
        nonlinear(to_factor(a, t), a, Na);

        for (std::size_t i = 0; i < ns; ++i) b[i] = E2_[i] * v[i] + Q_[i] * Na[i];
        nonlinear(to_factor(b, t), b, Nb);

        for (std::size_t i = 0; i < ns; ++i) c[i] = E2_[i] * a[i] + Q_[i] * (2.0 * Nb[i] - Nv[i]);
        nonlinear(to_factor(c, t), c, Nc);

        for (std::size_t i = 0; i < ns; ++i) {
            v[i] = E_[i] * v[i] + f1_[i] * Nv[i] + 2.0 * f2_[i] * (Na[i] + Nb[i]) + f3_[i] * Nc[i];
        }
        return to_factor(v, t + dt_);
    }

private:
    void filter(std::vector<Complex>& s) const {
        if (!dealias_) return;
        const auto& mask = plan_->dealias_mask();
        for (std::size_t i = 0; i < s.size(); ++i)
            if (mask[i]) s[i] = 0.0;
    }

    ScalarField to_factor(const std::vector<Complex>& spec, double t) const {
        ScalarField w(bg_->grid, 0.0);
        plan_->inverse(spec, w.values());
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
                std::ostringstream os;
                os << "positivity floor breached at t=" << format_double(t) << ", node " << i
                   << ", w=" << format_double(w[i]);
                throw FlowAbort(os.str(), t, i);
            }
            w[i] = power(w[i], to_u_);
        }
        return w;
    }

    // N(w) = F(w) - A Delta w in spectral space, where
    // F(w) = ((n+2)/4)(c_n Delta_{g0} u - R0 u + r w).
    void nonlinear(const ScalarField& u, const std::vector<Complex>& w_hat,
                   std::vector<Complex>& out) const {
        const Background& bg = *bg_;
        const int n = bg.dim();
        const double cn = conformal_coefficient(n);
        ScalarField lap = bg.laplacian(u);
        ScalarField F(bg.grid, 0.0);
        double r = 0.0;
        if (mode_ == FlowMode::Normalized) {
            ScalarField num(bg.grid, 0.0), den(bg.grid, 0.0);
            const double pv = 2.0 * n / (n - 2);
            for (std::size_t i = 0; i < u.size(); ++i) {
                num[i] = -u[i] * (cn * lap[i] - bg.R0[i] * u[i]) * bg.vol_weights[i];
                den[i] = power(u[i], pv) * bg.vol_weights[i];
            }
            r = pairwise_sum(num.values()) / pairwise_sum(den.values());
        }
        const double s = (n + 2.0) / 4.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            F[i] = s * (cn * lap[i] - bg.R0[i] * u[i] + r * power(u[i], to_w_));
        }
        plan_->forward(F.values(), out);
        const auto& k2 = plan_->k_squared();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += A_ * k2[i] * w_hat[i];
        filter(out);
    }

    BackgroundPtr bg_;
    FlowMode mode_;
    double dt_;
    bool dealias_;
    std::shared_ptr<const SpectralPlan> plan_;
    double to_u_ = 0.0, to_w_ = 0.0;
    double A_ = 0.0;
    std::vector<double> E_, E2_, Q_, f1_, f2_, f3_;
};

ScalarField rk4_advance(const BackgroundPtr& bg, const ScalarField& u, double dt, FlowMode mode,
                        bool dealias, double t) {
    auto stage = [&](const ScalarField& x) {
        check_positive(x, t);
        ScalarField k = flow_rhs(bg, x, mode);
        return dealias ? dealias_two_thirds(k) : k;
    };
    const ScalarField k1 = stage(u);
    const ScalarField k2 = stage(u + (0.5 * dt) * k1);
    const ScalarField k3 = stage(u + (0.5 * dt) * k2);
    const ScalarField k4 = stage(u + dt * k3);
    ScalarField out = u;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    return out;
}

MonitorSample sample_of(const MetricSummary& s, double t, std::size_t step) {
    MonitorSample m;
    m.step = step;
    m.t = t;
    m.volume = s.volume;
    m.r = s.r;
    m.total_scalar = s.total_scalar;
    m.u_min = s.u_min;
    m.u_max = s.u_max;
    m.inf_R = s.inf_R;
    m.sup_R = s.sup_R;
    m.int_R2 = s.int_R2;
    m.int_dev2 = s.int_dev2;
    return m;
}

}  // namespace

double rk4_stability_limit(const Background& bg, const ScalarField& u) {
    // 2.78 is the extent of the RK4 stability region on the negative real axis.
    return 2.78 / (max_diffusivity(bg, u) * spectral_radius_factor(bg));
}

FlowState make_state(const BackgroundPtr& bg, ScalarField u, double t, std::size_t step) {
    const ConformalMetric m(bg, std::move(u));
    MetricSummary s = summarize(m);
    FlowState st;
    st.t = t;
    st.step = step;
    st.u = m.u();
    st.R = std::move(s.R);
    st.r = s.r;
    st.volume = s.volume;
    st.total_scalar = s.total_scalar;
    st.u_min = s.u_min;
    st.u_max = s.u_max;
    st.inf_R = s.inf_R;
    return st;
}

ScalarField rhs_normalized(const ConformalMetric& m, double r) {
    ScalarField R = scalar_curvature(m);
    const double s = -(m.dim() - 2.0) / 4.0;
    const ScalarField& u = m.u();
    for (std::size_t i = 0; i < R.size(); ++i) R[i] = s * (R[i] - r) * u[i];
    return R;
}

ScalarField rhs_unnormalized(const ConformalMetric& m) { return rhs_normalized(m, 0.0); }

FlowState step(const FlowState& state, const BackgroundPtr& bg, const FlowConfig& cfg) {
    const double dt = cfg.dt;
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
    ScalarField u;
    if (cfg.stepper == Stepper::ExplicitRK4) {
        u = rk4_advance(bg, state.u, dt, cfg.mode, cfg.dealias, state.t);
    } else {
        EtdStepper etd(bg, cfg.mode, dt, cfg.dealias);
        etd.refresh(state.u, true);
        u = etd.advance(state.u, state.t);
    }
    check_positive(u, state.t + dt);
    return make_state(bg, std::move(u), state.t + dt, state.step + 1);
}

const Snapshot* TimeSeries::snapshot_at_sample(std::size_t k) const {
    for (const auto& s : snapshots)
        if (s.sample == k) return &s;
    return nullptr;
}

const Snapshot* TimeSeries::snapshot_near(double t) const {
    const Snapshot* best = nullptr;
    for (const auto& s : snapshots)
        if (!best || std::abs(s.t - t) < std::abs(best->t - t)) best = &s;
    return best;
}

TimeSeries run_flow(const ScalarField& u0, const BackgroundPtr& bg, const FlowConfig& cfg) {
    cfg.validate();
    require_same_grid(u0, bg->R0);
    TimeSeries ts;
    ts.config = cfg;
    ts.dim = bg->dim();
    ts.kind = bg->kind;
    ts.R0_min = bg->R0.min();
    ts.R0_max = bg->R0.max();
    ts.background_volume = bg->volume();

    const std::size_t nsteps = cfg.step_count();
    const double dt = cfg.effective_dt();
    if (std::abs(dt - cfg.dt) > 1e-12 * cfg.dt) {
        ts.warnings.push_back("dt adjusted to " + format_double(dt) + " to land on the horizon");
    }
    const double stride_time = dt * static_cast<double>(cfg.monitor_stride);
    const std::size_t last_sample = (nsteps + cfg.monitor_stride - 1) / cfg.monitor_stride;
    std::set<std::size_t> keep;
    for (double t : cfg.snapshot_times) {
        if (t < 0.0 || t > cfg.horizon + 1e-12) continue;
        const auto k = static_cast<std::size_t>(std::llround(t / stride_time));
        keep.insert(std::min(k, last_sample));
    }

    std::size_t sample_index = 0;
    auto record = [&](const ScalarField& u, double t, std::size_t stepno) {
        const ConformalMetric m(bg, u);
        ts.samples.push_back(sample_of(summarize(m), t, stepno));
        const bool every = cfg.snapshot_every > 0 && sample_index % cfg.snapshot_every == 0;
        if (every || keep.count(sample_index)) ts.snapshots.push_back({sample_index, t, u});
        ++sample_index;
    };

    ScalarField u = u0;
    try {
        check_positive(u, 0.0);
        record(u, 0.0, 0);
        EtdStepper etd(bg, cfg.mode, dt, cfg.dealias);
        bool warned = false;
        for (std::size_t s = 0; s < nsteps; ++s) {
            const double t = dt * static_cast<double>(s);
            if (cfg.stepper == Stepper::ExplicitRK4) {
                if (s % 100 == 0 && !warned) {
                    const double lim = rk4_stability_limit(*bg, u);
                    if (dt > lim) {
                        ts.warnings.push_back("dt=" + format_double(dt) +
                                              " exceeds the explicit stability estimate " +
                                              format_double(lim) + " at t=" + format_double(t));
                        warned = true;
                    }
                }
                u = rk4_advance(bg, u, dt, cfg.mode, cfg.dealias, t);
            } else {
                etd.refresh(u, s % 100 == 0);
                u = etd.advance(u, t);
            }
            check_positive(u, t + dt);
            const std::size_t done = s + 1;
            if (done % cfg.monitor_stride == 0 || done == nsteps) {
                record(u, done == nsteps ? cfg.horizon : dt * static_cast<double>(done), done);
            }
        }
        ts.completed = true;
    } catch (const FlowAbort& e) {
        std::ostringstream os;
        os << e.what() << "; recent u_min:";
        const std::size_t from = ts.samples.size() > 5 ? ts.samples.size() - 5 : 0;
        for (std::size_t k = from; k < ts.samples.size(); ++k)
            os << " " << format_double(ts.samples[k].u_min) << "@t=" << format_double(ts.samples[k].t);
        ts.abort_reason = os.str();
    } catch (const std::domain_error& e) {
        ts.abort_reason = e.what();
    }
    ts.final_u = u;
    return ts;
}

ScalarField scalar_evolution_rhs(const ConformalMetric& m, FlowMode mode) {
    const ScalarField R = scalar_curvature(m);
    ScalarField out = laplace_beltrami_of_metric(m, R);
    const double r = mode == FlowMode::Normalized ? mean_scalar(m) : 0.0;
    const double nm1 = m.dim() - 1.0;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = nm1 * out[i] + R[i] * (R[i] - r);
    return out;
}

double scalar_evolution_residual(const TimeSeries& series, const BackgroundPtr& bg,
                                 std::optional<FlowMode> cross_mode) {
    const FlowMode mode = cross_mode.value_or(series.config.mode);
    double worst = -1.0;
    for (const auto& mid : series.snapshots) {
        if (mid.sample == 0) continue;
        const Snapshot* prev = series.snapshot_at_sample(mid.sample - 1);
        const Snapshot* next = series.snapshot_at_sample(mid.sample + 1);
        if (!prev || !next) continue;
        const ConformalMetric mm(bg, mid.u);
        const ScalarField Rp = scalar_curvature(ConformalMetric(bg, prev->u));
        const ScalarField Rn = scalar_curvature(ConformalMetric(bg, next->u));
        const ScalarField R = scalar_curvature(mm);
        const ScalarField rhs = scalar_evolution_rhs(mm, mode);
        const double span = next->t - prev->t;
        double sup_diff = 0.0, sup_R = 0.0;
        for (std::size_t i = 0; i < R.size(); ++i) {
            const double dRdt = (Rn[i] - Rp[i]) / span;
            sup_diff = std::max(sup_diff, std::abs(dRdt - rhs[i]));
            sup_R = std::max(sup_R, std::abs(R[i]));
        }
        worst = std::max(worst, sup_diff / (sup_R + 1.0));
    }
    if (worst < 0.0) {
        throw std::invalid_argument("scalar evolution residual needs snapshots at three consecutive samples");
    }
    return worst;
}

std::vector<double> dr_dt_samples(const TimeSeries& series) {
    std::vector<double> out;
    const auto& s = series.samples;
    for (std::size_t k = 1; k + 1 < s.size(); ++k)
        out.push_back((s[k + 1].r - s[k - 1].r) / (s[k + 1].t - s[k - 1].t));
    return out;
}

double dr_dt_residual(const TimeSeries& series) {
    if (series.config.mode != FlowMode::Normalized)
        throw std::invalid_argument("dr/dt identity applies to the normalized flow only");
    if (series.samples.size() < 3) throw std::invalid_argument("dr/dt residual needs at least 3 samples");
    const double c = (series.dim - 2.0) / 2.0;
    const auto d = dr_dt_samples(series);
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < series.samples.size(); ++k) {
        const auto& m = series.samples[k];
        const double rhs = -c * m.int_dev2 / m.volume;
        worst = std::max(worst, std::abs(d[k - 1] - rhs) / (std::abs(rhs) + 1e-12));
    }
    return worst;
}

}  // namespace yfl
