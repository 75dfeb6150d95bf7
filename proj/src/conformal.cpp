#include "yfl/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "yfl/field_io.hpp"

namespace yfl {

double conformal_coefficient(int n) { return 4.0 * (n - 1) / (n - 2); }

const char* to_string(BackgroundKind kind) {
    switch (kind) {
        case BackgroundKind::Flat: return "flat";
        case BackgroundKind::ConformallyFlat: return "conformally-flat";
        case BackgroundKind::Synthetic: return "synthetic";
    }
    return "?";
}

BackgroundKind parse_background_kind(const std::string& s) {
    if (s == "flat" || s == "FLAT") return BackgroundKind::Flat;
    if (s == "conformally-flat" || s == "conformally_flat" || s == "CONFORMALLY_FLAT")
        return BackgroundKind::ConformallyFlat;
    if (s == "synthetic" || s == "SYNTHETIC") return BackgroundKind::Synthetic;
    throw std::invalid_argument("unknown background kind '" + s + "'");
}

double Background::volume() const { return integrate(vol_weights); }

ScalarField Background::inverse_metric_factor() const {
    if (kind != BackgroundKind::ConformallyFlat) return ScalarField(grid, 1.0);
    return power(conformal_to_flat, -4.0 / (dim() - 2));
}

ScalarField Background::laplacian(const ScalarField& f) const {
    if (kind != BackgroundKind::ConformallyFlat) return laplacian_flat(f, diff);
    // g0 = phi^{4/(n-2)} g_flat, so Delta_{g0} f = phi^{-4/(n-2)} (Delta f + 2 <grad phi, grad f> / phi).
    const ScalarField& phi = conformal_to_flat;
    ScalarField out = laplacian_flat(f, diff);
    ScalarField cross = grad_dot_flat(phi, f, diff);
    const double q = -4.0 / (dim() - 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = power(phi[i], q) * (out[i] + 2.0 * cross[i] / phi[i]);
    }
    return out;
}

ScalarField Background::grad_dot(const ScalarField& f, const ScalarField& h) const {
    ScalarField out = grad_dot_flat(f, h, diff);
    if (kind == BackgroundKind::ConformallyFlat) out *= inverse_metric_factor();
    return out;
}

std::string Background::manifest() const {
    std::ostringstream os;
    os << "kind=" << to_string(kind) << "\n";
    os << "n=" << dim() << "\n";
    os << "nodes=";
    for (std::size_t a = 0; a < grid->nodes.size(); ++a) os << (a ? "," : "") << grid->nodes[a];
    os << "\nperiods=";
    for (std::size_t a = 0; a < grid->periods.size(); ++a)
        os << (a ? "," : "") << format_double(grid->periods[a]);
    os << "\ndiff=" << (diff == DiffMode::Spectral ? "spectral" : "fd4") << "\n";
    os << "R0_min=" << format_double(R0.min()) << "\n";
    os << "R0_max=" << format_double(R0.max()) << "\n";
    os << "volume=" << format_double(volume()) << "\n";
    if (!provenance.empty()) os << "provenance=" << provenance << "\n";
    return os.str();
}

BackgroundPtr make_flat_background(GridPtr grid, DiffMode diff) {
    auto bg = std::make_shared<Background>();
    bg->grid = grid;
    bg->kind = BackgroundKind::Flat;
    bg->R0 = ScalarField(grid, 0.0);
    bg->vol_weights = ScalarField(grid, 1.0);
    bg->conformal_to_flat = ScalarField(grid, 1.0);
    bg->diff = diff;
    bg->provenance = "flat torus";
    return bg;
}

BackgroundPtr make_conformally_flat_background(const ScalarField& phi, DiffMode diff) {
    phi.require_finite("phi");
    if (phi.min() <= 0.0) throw std::invalid_argument("phi must be strictly positive");
    const int n = phi.grid().dim;
    auto bg = std::make_shared<Background>();
    bg->grid = phi.grid_ptr();
    bg->kind = BackgroundKind::ConformallyFlat;
    bg->conformal_to_flat = phi;
    bg->vol_weights = power(phi, 2.0 * n / (n - 2));
    bg->diff = diff;
    const double cn = conformal_coefficient(n);
    ScalarField lap = laplacian_flat(phi, diff);
    bg->R0 = ScalarField(bg->grid, 0.0);
    const double q = -(n + 2.0) / (n - 2.0);
    for (std::size_t i = 0; i < phi.size(); ++i) bg->R0[i] = -power(phi[i], q) * cn * lap[i];
    bg->provenance = "conformal to flat torus";
    return bg;
}

BackgroundPtr make_synthetic_background(const ScalarField& R0, DiffMode diff) {
    R0.require_finite("R0");
    auto bg = std::make_shared<Background>();
    bg->grid = R0.grid_ptr();
    bg->kind = BackgroundKind::Synthetic;
    bg->R0 = R0;
    bg->vol_weights = ScalarField(bg->grid, 1.0);
    bg->conformal_to_flat = ScalarField(bg->grid, 1.0);
    bg->diff = diff;
    bg->provenance = "synthetic operator-level background (prescribed R0 on flat chart)";
    return bg;
}

ConformalMetric::ConformalMetric(BackgroundPtr background, ScalarField u)
    : background_(std::move(background)), u_(std::move(u)) {
    if (!background_) throw std::invalid_argument("missing background");
    require_same_grid(u_, background_->R0);
    u_.require_finite("conformal factor");
    const std::size_t at = u_.argmin();
    if (!(u_[at] > kPositivityFloor)) {
        std::ostringstream os;
        os << "conformal factor below positivity floor: u=" << u_[at] << " at node " << at;
        throw std::domain_error(os.str());
    }
}

ScalarField scalar_curvature(const ConformalMetric& m) {
    const Background& bg = m.background();
    const int n = m.dim();
    const double cn = conformal_coefficient(n);
    const double q = -(n + 2.0) / (n - 2.0);
    const ScalarField& u = m.u();
    ScalarField R = bg.laplacian(u);
    for (std::size_t i = 0; i < R.size(); ++i) {
        R[i] = -power(u[i], q) * (cn * R[i] - bg.R0[i] * u[i]);
    }
    return R;
}

ScalarField laplace_beltrami_of_metric(const ConformalMetric& m, const ScalarField& f) {
    const Background& bg = m.background();
    const ScalarField& u = m.u();
    ScalarField out = bg.laplacian(f);
    ScalarField cross = bg.grad_dot(u, f);
    const double q = -4.0 / (m.dim() - 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = power(u[i], q) * (out[i] + 2.0 * cross[i] / u[i]);
    }
    return out;
}

ScalarField volume_density(const ConformalMetric& m) {
    const int n = m.dim();
    ScalarField d = power(m.u(), 2.0 * n / (n - 2));
    d *= m.background().vol_weights;
    return d;
}

double volume(const ConformalMetric& m) { return integrate(volume_density(m)); }

double total_scalar(const ConformalMetric& m) {
    return integrate(scalar_curvature(m), volume_density(m));
}

double dirichlet_total(const ConformalMetric& m) {
    const Background& bg = m.background();
    const ScalarField& u = m.u();
    ScalarField g2 = bg.grad_dot(u, u);
    const double cn = conformal_coefficient(m.dim());
    for (std::size_t i = 0; i < g2.size(); ++i) g2[i] = cn * g2[i] + bg.R0[i] * u[i] * u[i];
    return integrate(g2, bg.vol_weights);
}

double mean_scalar(const ConformalMetric& m) {
    const ScalarField d = volume_density(m);
    return integrate(scalar_curvature(m), d) / integrate(d);
}

double yamabe_quotient(const ConformalMetric& m) {
    const ScalarField d = volume_density(m);
    const double vol = integrate(d);
    const int n = m.dim();
    return integrate(scalar_curvature(m), d) / std::pow(vol, (n - 2.0) / n);
}

MetricSummary summarize(const ConformalMetric& m) {
    MetricSummary s;
    s.R = scalar_curvature(m);
    s.density = volume_density(m);
    s.volume = integrate(s.density);
    s.total_scalar = integrate(s.R, s.density);
    s.r = s.total_scalar / s.volume;
    s.inf_R = s.R.min();
    s.sup_R = s.R.max();
    ScalarField sq = s.R;
    ScalarField dev = s.R;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        sq[i] = s.R[i] * s.R[i];
        const double d = s.R[i] - s.r;
        dev[i] = d * d;
    }
    s.int_R2 = integrate(sq, s.density);
    s.int_dev2 = integrate(dev, s.density);
    s.u_min = m.u().min();
    s.u_max = m.u().max();
    return s;
}

}  // namespace yfl
