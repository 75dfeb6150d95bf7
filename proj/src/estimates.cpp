#include "yfl/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "yfl/field_io.hpp"

namespace yfl {

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Holds: return "HOLDS";
        case CheckStatus::ConclusionFailed: return "CONCLUSION_FAILED";
        case CheckStatus::HypothesisFailed: return "HYPOTHESIS_FAILED";
    }
    return "?";
}

void EstimateReport::set_parameter(const std::string& key, double value) {
    for (auto& [k, v] : parameters) {
        if (k == key) {
            v = value;
            return;
        }
    }
    parameters.emplace_back(key, value);
    std::sort(parameters.begin(), parameters.end());
}

void MarginTracker::observe(double lhs, double rhs, double t) {
    const double margin = rhs - lhs;
    const double excess = margin + tol_.allowed(std::max(std::abs(lhs), std::abs(rhs)));
    if (!seen_ || margin < worst_margin_) {
        worst_margin_ = margin;
        worst_time_ = t;
    }
    if (!seen_ || excess < worst_excess_) worst_excess_ = excess;
    if (excess < 0.0) violated_ = true;
    seen_ = true;
}

void MarginTracker::finish(EstimateReport& report) const {
    report.tolerance = tol_;
    report.worst_margin = worst_margin_;
    report.worst_time = worst_time_;
    report.worst_excess = worst_excess_;
    if (report.status == CheckStatus::Holds && violated_) report.status = CheckStatus::ConclusionFailed;
}

namespace {

EstimateReport start_report(const std::string& name, Tolerance tol) {
    EstimateReport r;
    r.name = name;
    r.tolerance = tol;
    return r;
}

EstimateReport hypothesis_failure(EstimateReport r, const std::string& why) {
    r.status = CheckStatus::HypothesisFailed;
    r.notes.push_back(why);
    return r;
}

void require_samples(const TimeSeries& s) {
    if (s.samples.empty()) throw std::invalid_argument("series has no samples");
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

std::vector<double> gronwall_bound(const std::vector<double>& alpha, const std::vector<double>& beta,
                                   const std::vector<double>& t) {
    const std::size_t n = t.size();
    if (alpha.size() != n || beta.size() != n) throw std::invalid_argument("gronwall: size mismatch");
    if (n == 0) return {};
    if (t[0] != 0.0) throw std::invalid_argument("gronwall: time grid must start at 0");
    for (std::size_t k = 0; k < n; ++k) {
        if (beta[k] < 0.0) throw std::invalid_argument("gronwall: beta must be nonnegative");
        if (k && !(t[k] > t[k - 1])) throw std::invalid_argument("gronwall: time grid must increase");
    }
    std::vector<double> out(n);
    out[0] = alpha[0];
    double I = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double h = t[k] - t[k - 1];
        const double growth = std::exp(0.5 * h * (beta[k - 1] + beta[k]));
        I = growth * I + 0.5 * h * (alpha[k - 1] * beta[k - 1] * growth + alpha[k] * beta[k]);
        out[k] = alpha[k] + I;
    }
    return out;
}

EstimateReport ye_min_bound_check(const TimeSeries& series, double Y_lower, double vol, Tolerance tol) {
    EstimateReport rep = start_report("ye-min", tol);
    const int n = series.dim;
    rep.set_parameter("Y", Y_lower);
    rep.set_parameter("Vol", vol);
    rep.set_parameter("n", n);
    require_samples(series);
    if (series.config.mode != FlowMode::Normalized)
        return hypothesis_failure(rep, "requires a normalized-flow series");
    if (series.R0_max > 0.0)
        return hypothesis_failure(rep, "background has positive R0 (max " + fmt(series.R0_max) + ")");
    if (Y_lower > 0.0) return hypothesis_failure(rep, "Y lower bound must be nonpositive");
    if (!(vol > 0.0)) return hypothesis_failure(rep, "volume must be positive");

    const double p = (n + 2.0) / (n - 2.0);
    const double rate = (n - 2.0) / (8.0 * (n - 1.0)) * Y_lower * std::pow(vol, -2.0 / n);
    rep.set_parameter("rate", rate);
    const double w0 = power(series.samples.front().u_min, p);
    MarginTracker tr(tol);
    for (const auto& s : series.samples) {
        tr.observe(std::exp(rate * s.t) * w0, power(s.u_min, p), s.t);
    }
    tr.finish(rep);
    return rep;
}

EstimateReport ye_max_bound_check(const TimeSeries& series, double kappa, double vol, double R0_min,
                                  Tolerance tol) {
    EstimateReport rep = start_report("ye-max", tol);
    const int n = series.dim;
    rep.set_parameter("kappa", kappa);
    rep.set_parameter("Vol", vol);
    rep.set_parameter("R0_min", R0_min);
    rep.set_parameter("n", n);
    require_samples(series);
    if (series.config.mode != FlowMode::Normalized)
        return hypothesis_failure(rep, "requires a normalized-flow series");
    if (series.R0_max > 0.0)
        return hypothesis_failure(rep, "background has positive R0 (max " + fmt(series.R0_max) + ")");
    if (!(vol > 0.0)) return hypothesis_failure(rep, "volume must be positive");
    const double total0 = series.samples.front().total_scalar;
    if (total0 > kappa + tol.allowed(kappa))
        return hypothesis_failure(rep, "total scalar curvature at t=0 (" + fmt(total0) + ") exceeds kappa");

    const double q = 4.0 / (n - 2.0);
    const double c = (n - 2.0) / ((n - 1.0) * (n + 2.0));
    const double beta = 2.0 * c * std::max(kappa, 0.0) / vol;
    rep.set_parameter("beta", beta);
    const double a0 = power(series.samples.front().u_max, q);
    std::vector<double> t, alpha, betas;
    for (const auto& s : series.samples) {
        t.push_back(s.t);
        alpha.push_back(a0 - c * R0_min * s.t);
        betas.push_back(beta);
    }
    const auto bound = gronwall_bound(alpha, betas, t);
    MarginTracker tr(tol);
    for (std::size_t k = 0; k < series.samples.size(); ++k) {
        tr.observe(power(series.samples[k].u_max, q), bound[k], t[k]);
    }
    tr.finish(rep);
    return rep;
}

EstimateReport scalar_lower_preservation_check(const TimeSeries& series, double inf_delta, Tolerance tol) {
    EstimateReport rep = start_report("scalar-lower", tol);
    rep.set_parameter("delta_min", inf_delta);
    require_samples(series);
    if (series.config.mode != FlowMode::Normalized)
        return hypothesis_failure(rep, "requires a normalized-flow series");
    const double R00 = series.samples.front().inf_R;
    if (R00 < inf_delta - tol.allowed(inf_delta))
        return hypothesis_failure(rep, "inf R(0) = " + fmt(R00) + " is below inf delta");
    const double floor = std::min(inf_delta, 0.0);
    rep.set_parameter("floor", floor);
    MarginTracker tr(tol);
    for (const auto& s : series.samples) tr.observe(floor, s.inf_R, s.t);
    tr.finish(rep);
    return rep;
}

EstimateReport brendle_sup_bound_check(const TimeSeries& series, double kappa, double vol, double sigma,
                                       Tolerance tol) {
    EstimateReport rep = start_report("brendle-sup", tol);
    const int n = series.dim;
    rep.set_parameter("kappa", kappa);
    rep.set_parameter("Vol", vol);
    rep.set_parameter("sigma", sigma);
    require_samples(series);
    if (series.config.mode != FlowMode::Normalized)
        return hypothesis_failure(rep, "requires a normalized-flow series");
    if (sigma < 1.0) return hypothesis_failure(rep, "sigma must be at least 1");
    if (!(vol > 0.0)) return hypothesis_failure(rep, "volume must be positive");
    const auto& s0 = series.samples.front();
    if (s0.inf_R + sigma < 1.0 - tol.allowed(1.0))
        return hypothesis_failure(rep, "R(0) + sigma >= 1 fails (inf R(0) = " + fmt(s0.inf_R) + ")");
    if (s0.total_scalar > kappa + tol.allowed(kappa))
        return hypothesis_failure(rep, "total scalar curvature at t=0 (" + fmt(s0.total_scalar) +
                                           ") exceeds kappa");
    const double slope = (n - 2.0) / 4.0 * (0.5 * kappa / vol + sigma);
    rep.set_parameter("slope", slope);
    MarginTracker tr(tol);
    for (const auto& s : series.samples) tr.observe(s.u_max, s0.u_max + slope * s.t, s.t);
    tr.finish(rep);
    return rep;
}

EstimateReport volume_bounds_check(const TimeSeries& series, double kappa, double Y, Tolerance tol) {
    EstimateReport rep = start_report("volume-bounds", tol);
    const int n = series.dim;
    rep.set_parameter("kappa", kappa);
    rep.set_parameter("Y", Y);
    require_samples(series);
    if (series.config.mode != FlowMode::Unnormalized)
        return hypothesis_failure(rep, "requires an unnormalized-flow series");
    if (Y > 0.0) return hypothesis_failure(rep, "Y must be nonpositive");
    const auto& s0 = series.samples.front();
    const double V0 = s0.volume;
    rep.set_parameter("Vol0", V0);
    if (s0.total_scalar > kappa + tol.allowed(kappa))
        return hypothesis_failure(rep, "total scalar curvature at t=0 (" + fmt(s0.total_scalar) +
                                           ") exceeds kappa");

    bool premise = true;
    for (const auto& s : series.samples) {
        if (s.r > s0.r + tol.allowed(s0.r)) {
            premise = false;
            rep.notes.push_back("lower bound skipped: r rose from " + fmt(s0.r) + " to " + fmt(s.r) +
                                " at t=" + fmt(s.t) + ", so its monotonicity premise fails");
            break;
        }
    }
    rep.set_parameter("lower_bound_checked", premise ? 1.0 : 0.0);

    const double V0p = std::pow(V0, 2.0 / n);
    const double displayed = std::pow(V0p - n * Y, n / 2.0);
    rep.set_parameter("upper_displayed", displayed);
    MarginTracker tr(tol);
    for (const auto& s : series.samples) {
        if (premise) tr.observe(V0 * std::exp(-n * kappa * s.t / (2.0 * V0)), s.volume, s.t);
        tr.observe(s.volume, std::pow(V0p - Y * s.t, n / 2.0), s.t);
        if (s.t <= 1.0) tr.observe(s.volume, displayed, s.t);
    }
    tr.finish(rep);
    return rep;
}

CPsi c_psi(const Background& bg, const ScalarField& psi, double zero_tol) {
    require_same_grid(psi, bg.R0);
    psi.require_finite("psi");
    const int n = bg.dim();
    const ScalarField lap = bg.laplacian(psi);
    const double a = (n + 2.0) / 4.0, b = -(n - 2.0) / 4.0;
    ScalarField integrand(bg.grid, 0.0);
    CPsi out;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        if (psi[i] < 0.0) throw std::invalid_argument("psi must be nonnegative");
        if (psi[i] == 0.0) {
            if (std::abs(lap[i]) > zero_tol) {
                throw std::invalid_argument("psi vanishes at node " + std::to_string(i) +
                                            " where |Delta psi| = " + fmt(std::abs(lap[i])) +
                                            " exceeds the admissibility tolerance");
            }
            ++out.skipped_nodes;
            continue;
        }
        integrand[i] = std::pow(std::abs(lap[i]), a) * std::pow(psi[i], b);
    }
    out.value = integrate(integrand, bg.vol_weights);
    return out;
}

EstimateReport l1_estimate_check(const TimeSeries& a, const TimeSeries& b, const Background& bg,
                                 const ScalarField& psi, L1Variable variable, Tolerance tol) {
    EstimateReport rep = start_report("l1", tol);
    const int n = bg.dim();
    if (a.config.mode != FlowMode::Unnormalized || b.config.mode != FlowMode::Unnormalized)
        return hypothesis_failure(rep, "requires two unnormalized-flow series");
    if (a.dim != b.dim || a.dim != n) throw std::invalid_argument("l1: series dimension mismatch");
    const CPsi C = c_psi(bg, psi);
    double int_psi = integrate(psi, bg.vol_weights);
    rep.set_parameter("C_psi", C.value);
    rep.set_parameter("int_psi", int_psi);
    rep.set_parameter("variable_is_density", variable == L1Variable::Density ? 1.0 : 0.0);
    const double e = 4.0 / (n + 2.0);
    const double slope =
        (n - 1.0) * (n + 2.0) / (n - 2.0) * std::pow(2.0 * C.value, e) + (n + 2.0) / 4.0 * std::pow(int_psi, e);
    rep.set_parameter("slope", slope);

    const double pw = variable == L1Variable::Density ? (n + 2.0) / (n - 2.0) : 1.0;
    auto lhs = [&](const ScalarField& ua, const ScalarField& ub) {
        require_same_grid(ua, ub);
        ScalarField d(ua.grid_ptr(), 0.0);
        for (std::size_t i = 0; i < d.size(); ++i) d[i] = psi[i] * std::abs(power(ua[i], pw) - power(ub[i], pw));
        return integrate(d, bg.vol_weights);
    };

    const Snapshot* a0 = a.snapshot_at_sample(0);
    const Snapshot* b0 = b.snapshot_at_sample(0);
    if (!a0 || !b0) throw std::invalid_argument("l1: both series need a snapshot at t = 0");
    const double base = std::pow(lhs(a0->u, b0->u), e);
    rep.set_parameter("lhs0", base);
    MarginTracker tr(tol);
    std::size_t matched = 0;
    for (const auto& sa : a.snapshots) {
        const Snapshot* sb = b.snapshot_at_sample(sa.sample);
        if (!sb) continue;
        if (std::abs(sa.t - sb->t) > 1e-12 * std::max(1.0, sa.t))
            throw std::invalid_argument("l1: series time grids differ");
        tr.observe(std::pow(lhs(sa.u, sb->u), e), base + slope * sa.t, sa.t);
        ++matched;
    }
    if (matched < 2) throw std::invalid_argument("l1: need matching snapshots beyond t = 0");
    rep.set_parameter("samples", static_cast<double>(matched));
    tr.finish(rep);
    return rep;
}

ConvergenceProbe uniform_convergence_probe(const std::vector<ConvergencePair>& pairs, double C0,
                                           const ScalarField& weights, std::size_t monotone_from,
                                           Tolerance tol) {
    ConvergenceProbe out;
    out.report = start_report("uniform-convergence", tol);
    EstimateReport& rep = out.report;
    rep.set_parameter("C0", C0);
    rep.set_parameter("monotone_from", static_cast<double>(monotone_from));
    if (!(C0 >= 1.0)) {
        rep = hypothesis_failure(rep, "C0 must be at least 1");
        return out;
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& p = pairs[i];
        if (p.member.min() < 1.0 / C0 - tol.abs || p.member.max() > C0 + tol.abs) {
            rep = hypothesis_failure(rep, "member " + std::to_string(i + 1) + " leaves [1/C0, C0]");
        }
        const FieldDistances d = field_metrics(p.member, p.limit, weights, 1.0);
        out.sup_distances.push_back(d.sup);
        out.l1_distances.push_back(d.l1);
    }
    for (std::size_t i = 1; i < out.l1_distances.size(); ++i) {
        if (out.l1_distances[i] > out.l1_distances[i - 1] + tol.allowed(out.l1_distances[i - 1])) {
            rep = hypothesis_failure(rep, "L1 distances are not decreasing at member " + std::to_string(i + 1));
            break;
        }
    }

    // Least-squares slope of log sup against log L1.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < out.sup_distances.size(); ++i) {
        if (out.sup_distances[i] > 0.0 && out.l1_distances[i] > 0.0) {
            const double x = std::log(out.l1_distances[i]), y = std::log(out.sup_distances[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++m;
        }
    }
    if (m >= 2 && m * sxx - sx * sx > 0.0) out.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.set_parameter("fitted_exponent", out.fitted_exponent);

    double worst = std::numeric_limits<double>::infinity();
    double worst_index = 0.0;
    bool ok = true;
    for (std::size_t i = std::max<std::size_t>(monotone_from, 1); i < out.sup_distances.size(); ++i) {
        const double prev = out.sup_distances[i - 1], cur = out.sup_distances[i];
        const double gap = prev - cur;
        if (gap < worst) {
            worst = gap;
            worst_index = static_cast<double>(i + 1);
        }
        const bool converged = prev <= tol.abs && cur <= tol.abs;
        if (!(gap > 0.0) && !converged) ok = false;
    }
    rep.worst_margin = std::isfinite(worst) ? worst : 0.0;
    rep.worst_time = 0.0;
    rep.set_parameter("worst_index", worst_index);
    rep.worst_excess = rep.worst_margin;
    if (rep.status == CheckStatus::Holds && !ok) {
        rep.status = CheckStatus::ConclusionFailed;
        rep.notes.push_back("sup distances stop decreasing");
    }
    return out;
}

}  // namespace yfl
