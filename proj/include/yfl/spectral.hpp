#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "yfl/grid.hpp"

namespace yfl {

using Complex = std::complex<double>;

/// Real-to-half-complex FFT on a periodic grid, backed by FFTW.
///
/// Plans are built once per grid shape with FFTW_ESTIMATE (deterministic
/// algorithm choice) and shared. Execution uses the new-array interface and
/// is safe to call from several threads.
class SpectralPlan {
public:
    explicit SpectralPlan(const GridSpec& grid);
    ~SpectralPlan();
    SpectralPlan(const SpectralPlan&) = delete;
    SpectralPlan& operator=(const SpectralPlan&) = delete;

    std::size_t real_size() const { return real_size_; }
    /// Number of stored modes; the last axis keeps N/2+1 entries.
    std::size_t spectral_size() const { return spectral_size_; }

    /// Unnormalized forward transform.
    void forward(std::span<const double> in, std::span<Complex> out) const;
    /// Inverse transform including the 1/N normalization.
    void inverse(std::span<const Complex> in, std::span<double> out) const;

    /// |k|^2 for every stored mode, k in radians per length unit.
    const std::vector<double>& k_squared() const { return k_squared_; }
    /// Wavenumber along `axis` for every stored mode; zero at the Nyquist index.
    const std::vector<double>& k_axis(int axis) const { return k_axis_[axis]; }
    /// True where any axis index exceeds N/3 in magnitude.
    const std::vector<unsigned char>& dealias_mask() const { return dealias_mask_; }

private:
    std::size_t real_size_ = 0;
    std::size_t spectral_size_ = 0;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
    std::vector<double> k_squared_;
    std::vector<std::vector<double>> k_axis_;
    std::vector<unsigned char> dealias_mask_;
};

/// Shared plan for the given grid shape.
std::shared_ptr<const SpectralPlan> spectral_plan(const GridSpec& grid);

}  // namespace yfl
