#pragma once

#include <string>
#include <utility>
#include <vector>

#include "yfl/flow.hpp"

namespace yfl {

enum class CheckStatus { Holds, ConclusionFailed, HypothesisFailed };

const char* to_string(CheckStatus s);

struct Tolerance {
    double abs = 1e-6;
    double rel = 1e-6;
    /// Allowed shortfall for an inequality lhs <= rhs.
    double allowed(double scale) const { return abs + rel * std::abs(scale); }
};

struct EstimateReport {
    std::string name;
    CheckStatus status = CheckStatus::Holds;
    /// Smallest signed slack (rhs - lhs) over all samples; positive means slack.
    double worst_margin = 0.0;
    double worst_time = 0.0;
    /// Worst slack after subtracting the allowed tolerance at that sample.
    double worst_excess = 0.0;
    std::vector<std::pair<std::string, double>> parameters;
    Tolerance tolerance;
    std::vector<std::string> notes;

    bool holds() const { return status == CheckStatus::Holds; }
    void set_parameter(const std::string& key, double value);
};

/// Accumulates lhs <= rhs comparisons into a report.
class MarginTracker {
public:
    explicit MarginTracker(Tolerance tol) : tol_(tol) {}
    void observe(double lhs, double rhs, double t);
    bool any() const { return seen_; }
    void finish(EstimateReport& report) const;

private:
    Tolerance tol_;
    bool seen_ = false;
    double worst_margin_ = 0.0, worst_time_ = 0.0, worst_excess_ = 0.0;
    bool violated_ = false;
};

/// u(t) <= alpha(t) + int_0^t alpha(s) beta(s) exp(int_s^t beta) ds, evaluated
/// at the nodes of `t` with nested trapezoidal quadrature. The recursion
/// I_k = e^{dB_k} I_{k-1} + (h/2)(alpha_{k-1} beta_{k-1} e^{dB_k} + alpha_k beta_k)
/// is the trapezoid rule applied to both integrals. Throws on negative beta or
/// a time grid that does not start at 0 and increase.
std::vector<double> gronwall_bound(const std::vector<double>& alpha, const std::vector<double>& beta,
                                   const std::vector<double>& t);

/// Nonpositive case, minimum principle:
/// u_min^{(n+2)/(n-2)}(t) >= exp((n-2)/(8(n-1)) Y Vol^{-2/n} t) u_min^{(n+2)/(n-2)}(0).
EstimateReport ye_min_bound_check(const TimeSeries& series, double Y_lower, double vol,
                                  Tolerance tol = {});

/// Nonpositive case, maximum principle and Gronwall:
/// u_max^{4/(n-2)}(t) <= alpha(t) + int_0^t alpha(s) b e^{b(t-s)} ds with
/// alpha(t) = u_max(0)^{4/(n-2)} - (n-2)/((n-1)(n+2)) min R0 t and
/// b = 2(n-2)/((n-1)(n+2)) Vol^{-1} max{kappa, 0}.
EstimateReport ye_max_bound_check(const TimeSeries& series, double kappa, double vol, double R0_min,
                                  Tolerance tol = {});

/// inf R(g(t)) >= min{inf delta, 0}. `inf_delta` is min over nodes of delta.
EstimateReport scalar_lower_preservation_check(const TimeSeries& series, double inf_delta,
                                               Tolerance tol = {});

/// sup u(t) <= sup u(0) + ((n-2)/4)((1/2) Vol^{-1} kappa + sigma) t, gated on
/// sigma >= 1, inf R(0) + sigma >= 1 and total_scalar(0) <= kappa.
EstimateReport brendle_sup_bound_check(const TimeSeries& series, double kappa, double vol,
                                       double sigma, Tolerance tol = {});

/// Unnormalized flow volume bounds, integrated forms:
///   lower  Vol(t) >= Vol(0) exp(-n kappa t / (2 Vol(0)))
///   upper  Vol(t) <= (Vol(0)^{2/n} - Y t)^{n/2}
/// plus the time-independent upper display (Vol(0)^{2/n} - n Y)^{n/2} for t <= 1.
/// The lower bound relies on r(t) <= r(0); when the samples contradict that
/// premise the lower bound is skipped with a note.
EstimateReport volume_bounds_check(const TimeSeries& series, double kappa, double Y,
                                   Tolerance tol = {});

/// Which conformal quantity the L1 estimate compares.
enum class L1Variable {
    /// w = u^{(n+2)/(n-2)}, the variable of the fast-diffusion form.
    Density,
    /// u itself.
    Factor,
};

struct CPsi {
    double value = 0.0;
    std::size_t skipped_nodes = 0;
};

/// C[psi] = int |Delta_{g0} psi|^{(n+2)/4} psi^{-(n-2)/4} dvol_{g0}, with zero
/// contribution where psi = 0 and |Delta psi| <= zero_tol. Throws
/// std::invalid_argument for negative psi or psi = 0 with |Delta psi| > zero_tol.
CPsi c_psi(const Background& bg, const ScalarField& psi, double zero_tol = 1e-10);

/// Lemma-type L1 estimate between two unnormalized flows sharing a
/// background and time grid. Needs u snapshots at matching samples.
EstimateReport l1_estimate_check(const TimeSeries& a, const TimeSeries& b, const Background& bg,
                                 const ScalarField& psi, L1Variable variable = L1Variable::Density,
                                 Tolerance tol = {});

struct ConvergencePair {
    ScalarField member;
    ScalarField limit;
};

/// Distances of a sequence u_i -> u under C0^{-1} <= u_i <= C0 and L1
/// convergence. Reports sup and L1 distance sequences and a log-log slope of
/// sup against L1. Holds when sup distances decrease strictly from
/// `monotone_from` (1-based) onward.
struct ConvergenceProbe {
    EstimateReport report;
    std::vector<double> sup_distances;
    std::vector<double> l1_distances;
    double fitted_exponent = 0.0;
};

ConvergenceProbe uniform_convergence_probe(const std::vector<ConvergencePair>& pairs, double C0,
                                           const ScalarField& weights, std::size_t monotone_from = 4,
                                           Tolerance tol = {});

}  // namespace yfl
