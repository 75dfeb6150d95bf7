#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace yfl {

/// Uniform periodic grid on the flat n-torus with n >= 3.
///
/// Nodes sit at x_k = i_k * L_k / N_k for i_k = 0..N_k-1. Field values are
/// stored row-major in axis order, so axis 0 varies slowest.
struct GridSpec {
    int dim = 0;
    std::vector<std::size_t> nodes;
    std::vector<double> periods;

    std::size_t size() const;
    double spacing(int axis) const { return periods[axis] / static_cast<double>(nodes[axis]); }
    double cell_volume() const;
    double total_volume() const;
    /// Distance in flat index between neighbours along `axis`.
    std::size_t stride(int axis) const;

    bool operator==(const GridSpec&) const = default;
};

using GridPtr = std::shared_ptr<const GridSpec>;

inline constexpr int kMinDimension = 3;
inline constexpr std::size_t kMinNodesPerAxis = 8;

/// Validates and builds a grid. Throws std::invalid_argument on n < 3,
/// fewer than 8 nodes on an axis, or a nonpositive period.
GridPtr make_grid(int n, std::vector<std::size_t> nodes_per_axis, std::vector<double> periods);

/// Convenience: same node count and period on every axis.
GridPtr make_cubic_grid(int n, std::size_t nodes, double period = 1.0);

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid, double value = 0.0);
    ScalarField(GridPtr grid, std::vector<double> values);

    /// Samples `fn` at every node; `fn` receives the node coordinates.
    static ScalarField from_function(GridPtr grid,
                                     const std::function<double(std::span<const double>)>& fn);

    const GridSpec& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    bool empty() const { return !grid_; }

    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    const std::vector<double>& data() const { return values_; }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    double min() const;
    double max() const;
    std::size_t argmin() const;
    std::size_t argmax() const;
    bool all_finite() const;

    /// Throws std::invalid_argument if any value is NaN or infinite.
    void require_finite(const char* what) const;

    ScalarField& operator+=(const ScalarField& o);
    ScalarField& operator-=(const ScalarField& o);
    ScalarField& operator*=(const ScalarField& o);
    ScalarField& operator*=(double s);
    ScalarField& operator+=(double s);

private:
    GridPtr grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, const ScalarField& b);
ScalarField operator*(ScalarField a, double s);
ScalarField operator*(double s, ScalarField a);

/// Elementwise map.
ScalarField map(const ScalarField& f, const std::function<double(double)>& fn);

/// f^p elementwise; integer exponents use repeated multiplication.
ScalarField power(const ScalarField& f, double p);
double power(double x, double p);

bool same_grid(const ScalarField& a, const ScalarField& b);
void require_same_grid(const ScalarField& a, const ScalarField& b);

/// Coordinates of node `index`.
std::vector<double> node_coordinates(const GridSpec& grid, std::size_t index);

enum class DiffMode { Spectral, FiniteDifference4 };

/// Flat-torus Laplacian. Spectral mode applies the Fourier multiplier
/// -|2 pi k / L|^2 (including the Nyquist mode); FD mode uses the 4th-order
/// centred 5-point stencil on each axis.
ScalarField laplacian_flat(const ScalarField& f, DiffMode mode = DiffMode::Spectral);

/// Partial derivative along `axis`. The spectral derivative zeroes the
/// Nyquist mode so that real fields stay real.
ScalarField partial_flat(const ScalarField& f, int axis, DiffMode mode = DiffMode::Spectral);

std::vector<ScalarField> gradient_flat(const ScalarField& f, DiffMode mode = DiffMode::Spectral);

/// |grad f|^2 with respect to the flat metric.
ScalarField grad_squared_flat(const ScalarField& f, DiffMode mode = DiffMode::Spectral);

/// <grad f, grad g> with respect to the flat metric.
ScalarField grad_dot_flat(const ScalarField& f, const ScalarField& g,
                          DiffMode mode = DiffMode::Spectral);

/// Zeroes every Fourier mode with |k_j| > N_j / 3 on some axis.
ScalarField dealias_two_thirds(const ScalarField& f);

/// Pairwise (fixed-order) sum, so reductions are bit-stable.
double pairwise_sum(std::span<const double> v);

/// sum_i f_i * w_i * cell_volume. Rejects nonpositive weights.
double integrate(const ScalarField& f, const ScalarField& weights);

/// Integral against the flat measure.
double integrate(const ScalarField& f);

struct FieldDistances {
    double sup = 0.0;
    double l1 = 0.0;
    double lp = 0.0;
    double p = 1.0;
};

/// sup |f-g|, int |f-g| dvol and (int |f-g|^p dvol)^(1/p), measured with
/// `weights` as the volume density. Throws on grid mismatch.
FieldDistances field_metrics(const ScalarField& f, const ScalarField& g,
                             const ScalarField& weights, double p);
FieldDistances field_metrics(const ScalarField& f, const ScalarField& g, double p);

}  // namespace yfl
