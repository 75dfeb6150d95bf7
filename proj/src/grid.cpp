#include "yfl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "yfl/spectral.hpp"

namespace yfl {

std::size_t GridSpec::size() const {
    std::size_t s = 1;
    for (auto n : nodes) s *= n;
    return s;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int k = 0; k < dim; ++k) v *= spacing(k);
    return v;
}

double GridSpec::total_volume() const {
    double v = 1.0;
    for (double p : periods) v *= p;
    return v;
}

std::size_t GridSpec::stride(int axis) const {
    std::size_t s = 1;
    for (int k = dim - 1; k > axis; --k) s *= nodes[k];
    return s;
}

GridPtr make_grid(int n, std::vector<std::size_t> nodes_per_axis, std::vector<double> periods) {
    if (n < kMinDimension) {
        throw std::invalid_argument("dimension below 3");
    }
    if (nodes_per_axis.size() != static_cast<std::size_t>(n) ||
        periods.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("grid: expected " + std::to_string(n) +
                                    " node counts and periods");
    }
    for (auto m : nodes_per_axis) {
        if (m < kMinNodesPerAxis) {
            throw std::invalid_argument("grid: too few nodes on an axis (minimum 8)");
        }
    }
    for (double p : periods) {
        if (!(p > 0.0) || !std::isfinite(p)) {
            throw std::invalid_argument("grid: periods must be positive");
        }
    }
    auto g = std::make_shared<GridSpec>();
    g->dim = n;
    g->nodes = std::move(nodes_per_axis);
    g->periods = std::move(periods);
    return g;
}

GridPtr make_cubic_grid(int n, std::size_t nodes, double period) {
    if (n < kMinDimension) throw std::invalid_argument("dimension below 3");
    return make_grid(n, std::vector<std::size_t>(n, nodes), std::vector<double>(n, period));
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(GridPtr grid, double value) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("ScalarField: null grid");
    values_.assign(grid_->size(), value);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw std::invalid_argument("ScalarField: null grid");
    if (values_.size() != grid_->size()) {
        throw std::invalid_argument("ScalarField: value count does not match grid");
    }
}

ScalarField ScalarField::from_function(GridPtr grid,
                                       const std::function<double(std::span<const double>)>& fn) {
    ScalarField f(grid);
    const GridSpec& g = *grid;
    std::vector<std::size_t> idx(g.dim, 0);
    std::vector<double> x(g.dim, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        for (int a = 0; a < g.dim; ++a) x[a] = static_cast<double>(idx[a]) * g.spacing(a);
        f.values_[i] = fn(x);
        for (int a = g.dim - 1; a >= 0; --a) {
            if (++idx[a] < g.nodes[a]) break;
            idx[a] = 0;
        }
    }
    return f;
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

std::size_t ScalarField::argmin() const {
    return static_cast<std::size_t>(std::min_element(values_.begin(), values_.end()) -
                                    values_.begin());
}

std::size_t ScalarField::argmax() const {
    return static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) -
                                    values_.begin());
}

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void ScalarField::require_finite(const char* what) const {
    if (!grid_) throw std::invalid_argument(std::string(what) + ": empty field");
    if (!all_finite()) throw std::invalid_argument(std::string(what) + ": non-finite field value");
}

ScalarField& ScalarField::operator+=(const ScalarField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(const ScalarField& o) {
    require_same_grid(*this, o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] *= o.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField& ScalarField::operator+=(double s) {
    for (double& v : values_) v += s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(ScalarField a, const ScalarField& b) { return a *= b; }
ScalarField operator*(ScalarField a, double s) { return a *= s; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

ScalarField map(const ScalarField& f, const std::function<double(double)>& fn) {
    ScalarField out = f;
    for (double& v : out.values()) v = fn(v);
    return out;
}

double power(double x, double p) {
    const double rounded = std::round(p);
    if (rounded == p && std::abs(p) <= 16.0) {
        const int e = static_cast<int>(rounded);
        double base = e < 0 ? 1.0 / x : x;
        double result = 1.0;
        for (int k = std::abs(e); k > 0; k >>= 1) {
            if (k & 1) result *= base;
            base *= base;
        }
        return result;
    }
    return std::pow(x, p);
}

ScalarField power(const ScalarField& f, double p) {
    ScalarField out = f;
    for (double& v : out.values()) v = power(v, p);
    return out;
}

bool same_grid(const ScalarField& a, const ScalarField& b) {
    if (a.empty() || b.empty()) return false;
    return a.grid_ptr() == b.grid_ptr() || a.grid() == b.grid();
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (!same_grid(a, b)) throw std::invalid_argument("grid mismatch");
}

std::vector<double> node_coordinates(const GridSpec& grid, std::size_t index) {
    std::vector<double> x(grid.dim);
    for (int a = grid.dim - 1; a >= 0; --a) {
        const std::size_t i = index % grid.nodes[a];
        index /= grid.nodes[a];
        x[a] = static_cast<double>(i) * grid.spacing(a);
    }
    return x;
}

// ---------------------------------------------------------------------------
// Differential operators

namespace {

// Applies a 5-point periodic stencil along one axis, accumulating into out.
void add_axis_stencil(const ScalarField& f, int axis, const double (&w)[5], double scale,
                      std::vector<double>& out) {
    const GridSpec& g = f.grid();
    const std::size_t n = g.nodes[axis];
    const std::size_t s = g.stride(axis);
    const auto v = f.values();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t ia = (i / s) % n;
        const std::size_t base = i - ia * s;
        double acc = 0.0;
        for (int m = -2; m <= 2; ++m) {
            const std::size_t j = (ia + n + static_cast<std::size_t>(m + 2) - 2) % n;
            acc += w[m + 2] * v[base + j * s];
        }
        out[i] += scale * acc;
    }
}

ScalarField spectral_multiply(const ScalarField& f, const std::function<Complex(std::size_t)>& mult) {
    auto plan = spectral_plan(f.grid());
    std::vector<Complex> spec(plan->spectral_size());
    plan->forward(f.values(), spec);
    for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= mult(m);
    ScalarField out(f.grid_ptr());
    plan->inverse(spec, out.values());
    return out;
}

}  // namespace

ScalarField laplacian_flat(const ScalarField& f, DiffMode mode) {
    f.require_finite("laplacian_flat");
    if (mode == DiffMode::Spectral) {
        auto plan = spectral_plan(f.grid());
        const auto& k2 = plan->k_squared();
        std::vector<Complex> spec(plan->spectral_size());
        plan->forward(f.values(), spec);
        for (std::size_t m = 0; m < spec.size(); ++m) spec[m] *= -k2[m];
        ScalarField out(f.grid_ptr());
        plan->inverse(spec, out.values());
        return out;
    }
    static constexpr double w[5] = {-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0,
                                    -1.0 / 12.0};
    std::vector<double> out(f.size(), 0.0);
    for (int a = 0; a < f.grid().dim; ++a) {
        const double h = f.grid().spacing(a);
        add_axis_stencil(f, a, w, 1.0 / (h * h), out);
    }
    return ScalarField(f.grid_ptr(), std::move(out));
}

ScalarField partial_flat(const ScalarField& f, int axis, DiffMode mode) {
    f.require_finite("partial_flat");
    if (axis < 0 || axis >= f.grid().dim) throw std::invalid_argument("partial_flat: bad axis");
    if (mode == DiffMode::Spectral) {
        auto plan = spectral_plan(f.grid());
        const auto& k = plan->k_axis(axis);
        return spectral_multiply(f, [&](std::size_t m) { return Complex(0.0, k[m]); });
    }
    static constexpr double w[5] = {1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0};
    std::vector<double> out(f.size(), 0.0);
    add_axis_stencil(f, axis, w, 1.0 / f.grid().spacing(axis), out);
    return ScalarField(f.grid_ptr(), std::move(out));
}

std::vector<ScalarField> gradient_flat(const ScalarField& f, DiffMode mode) {
    std::vector<ScalarField> g;
    g.reserve(f.grid().dim);
    for (int a = 0; a < f.grid().dim; ++a) g.push_back(partial_flat(f, a, mode));
    return g;
}

ScalarField grad_squared_flat(const ScalarField& f, DiffMode mode) {
    ScalarField out(f.grid_ptr(), 0.0);
    for (const auto& d : gradient_flat(f, mode)) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += d[i] * d[i];
    }
    return out;
}

ScalarField grad_dot_flat(const ScalarField& f, const ScalarField& g, DiffMode mode) {
    require_same_grid(f, g);
    ScalarField out(f.grid_ptr(), 0.0);
    for (int a = 0; a < f.grid().dim; ++a) {
        const ScalarField df = partial_flat(f, a, mode);
        const ScalarField dg = partial_flat(g, a, mode);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += df[i] * dg[i];
    }
    return out;
}

ScalarField dealias_two_thirds(const ScalarField& f) {
    auto plan = spectral_plan(f.grid());
    const auto& mask = plan->dealias_mask();
    return spectral_multiply(f, [&](std::size_t m) { return mask[m] ? Complex(0.0) : Complex(1.0); });
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

double pairwise_sum_impl(const double* v, std::size_t n) {
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum_impl(v, half) + pairwise_sum_impl(v + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise_sum_impl(v.data(), v.size()); }

double integrate(const ScalarField& f, const ScalarField& weights) {
    require_same_grid(f, weights);
    std::vector<double> prod(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!(weights[i] > 0.0)) throw std::invalid_argument("integrate: nonpositive weight");
        prod[i] = f[i] * weights[i];
    }
    return pairwise_sum(prod) * f.grid().cell_volume();
}

double integrate(const ScalarField& f) {
    if (f.empty()) throw std::invalid_argument("integrate: empty field");
    return pairwise_sum(f.values()) * f.grid().cell_volume();
}

FieldDistances field_metrics(const ScalarField& f, const ScalarField& g,
                             const ScalarField& weights, double p) {
    require_same_grid(f, g);
    require_same_grid(f, weights);
    if (!(p >= 1.0)) throw std::invalid_argument("field_metrics: p must be >= 1");
    FieldDistances d;
    d.p = p;
    ScalarField diff(f.grid_ptr());
    ScalarField diffp(f.grid_ptr());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f[i] - g[i]);
        d.sup = std::max(d.sup, a);
        diff[i] = a;
        diffp[i] = std::pow(a, p);
    }
    d.l1 = integrate(diff, weights);
    d.lp = std::pow(integrate(diffp, weights), 1.0 / p);
    return d;
}

FieldDistances field_metrics(const ScalarField& f, const ScalarField& g, double p) {
    return field_metrics(f, g, ScalarField(f.grid_ptr(), 1.0), p);
}

}  // namespace yfl
