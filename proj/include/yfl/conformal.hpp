#pragma once

#include <memory>
#include <string>

#include "yfl/grid.hpp"

namespace yfl {

/// c_n = 4(n-1)/(n-2).
double conformal_coefficient(int n);

enum class BackgroundKind { Flat, ConformallyFlat, Synthetic };

const char* to_string(BackgroundKind kind);
BackgroundKind parse_background_kind(const std::string& s);

/// Reference metric g0 on the torus grid.
///
/// For ConformallyFlat, g0 = phi^{4/(n-2)} g_flat and `conformal_to_flat`
/// holds phi. Synthetic backgrounds prescribe R0 directly on a flat chart;
/// they stand in for geometries that the torus cannot carry.
struct Background {
    GridPtr grid;
    BackgroundKind kind = BackgroundKind::Flat;
    ScalarField R0;
    ScalarField vol_weights;
    ScalarField conformal_to_flat;
    DiffMode diff = DiffMode::Spectral;
    std::string provenance;

    int dim() const { return grid->dim; }
    /// Vol(M, g0).
    double volume() const;
    /// Laplace-Beltrami operator of g0.
    ScalarField laplacian(const ScalarField& f) const;
    /// <grad f, grad h>_{g0}.
    ScalarField grad_dot(const ScalarField& f, const ScalarField& h) const;
    /// Pointwise factor phi^{-4/(n-2)} relating g0 gradients to flat ones (1 unless conformally flat).
    ScalarField inverse_metric_factor() const;

    /// Human-readable key=value manifest.
    std::string manifest() const;
};

using BackgroundPtr = std::shared_ptr<const Background>;

BackgroundPtr make_flat_background(GridPtr grid, DiffMode diff = DiffMode::Spectral);
/// Throws std::invalid_argument when phi is not strictly positive.
BackgroundPtr make_conformally_flat_background(const ScalarField& phi,
                                               DiffMode diff = DiffMode::Spectral);
BackgroundPtr make_synthetic_background(const ScalarField& R0, DiffMode diff = DiffMode::Spectral);

inline constexpr double kPositivityFloor = 1e-12;

/// g = u^{4/(n-2)} g0 with u above the positivity floor.
class ConformalMetric {
public:
    ConformalMetric(BackgroundPtr background, ScalarField u);

    const Background& background() const { return *background_; }
    const BackgroundPtr& background_ptr() const { return background_; }
    const ScalarField& u() const { return u_; }
    int dim() const { return background_->dim(); }

private:
    BackgroundPtr background_;
    ScalarField u_;
};

/// R(g) = -u^{-(n+2)/(n-2)} (c_n Delta_{g0} u - R0 u).
ScalarField scalar_curvature(const ConformalMetric& m);

/// Delta_g f = u^{-4/(n-2)} (Delta_{g0} f + 2 <grad u, grad f>_{g0} / u).
ScalarField laplace_beltrami_of_metric(const ConformalMetric& m, const ScalarField& f);

/// dvol_g density against the flat measure: u^{2n/(n-2)} * vol_weights.
ScalarField volume_density(const ConformalMetric& m);

double volume(const ConformalMetric& m);
double total_scalar(const ConformalMetric& m);
/// int (c_n |grad u|^2_{g0} + R0 u^2) dvol_{g0}.
double dirichlet_total(const ConformalMetric& m);
double mean_scalar(const ConformalMetric& m);
double yamabe_quotient(const ConformalMetric& m);

/// Everything the flow monitors need, computed from one curvature evaluation.
struct MetricSummary {
    ScalarField R;
    ScalarField density;
    double volume = 0.0;
    double total_scalar = 0.0;
    double r = 0.0;
    double inf_R = 0.0;
    double sup_R = 0.0;
    double int_R2 = 0.0;
    double int_dev2 = 0.0;
    double u_min = 0.0;
    double u_max = 0.0;
};

MetricSummary summarize(const ConformalMetric& m);

}  // namespace yfl
