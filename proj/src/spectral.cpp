#include "yfl/spectral.hpp"

#include <fftw3.h>

#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace yfl {

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// Signed integer frequency for index i of an N-point transform.
long signed_index(std::size_t i, std::size_t n) {
    return i <= n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
}

}  // namespace

SpectralPlan::SpectralPlan(const GridSpec& grid) {
    const int d = grid.dim;
    std::vector<int> dims(d);
    real_size_ = 1;
    for (int k = 0; k < d; ++k) {
        dims[k] = static_cast<int>(grid.nodes[k]);
        real_size_ *= grid.nodes[k];
    }
    const std::size_t last = grid.nodes[d - 1] / 2 + 1;
    spectral_size_ = real_size_ / grid.nodes[d - 1] * last;

    {
        // The FFTW planner is not thread-safe.
        std::lock_guard lock(planner_mutex());
        std::vector<double> rbuf(real_size_);
        std::vector<Complex> cbuf(spectral_size_);
        auto* cptr = reinterpret_cast<fftw_complex*>(cbuf.data());
        forward_plan_ = fftw_plan_dft_r2c(d, dims.data(), rbuf.data(), cptr,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        inverse_plan_ = fftw_plan_dft_c2r(d, dims.data(), cptr, rbuf.data(),
                                          FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
    }
    if (!forward_plan_ || !inverse_plan_) {
        throw std::runtime_error("FFTW planning failed");
    }

    // Shape of the half-complex array: nodes[0..d-2] x last.
    std::vector<std::size_t> shape(grid.nodes.begin(), grid.nodes.end());
    shape[d - 1] = last;

    k_squared_.assign(spectral_size_, 0.0);
    k_axis_.assign(d, std::vector<double>(spectral_size_, 0.0));
    dealias_mask_.assign(spectral_size_, 0);

    std::vector<std::size_t> idx(d, 0);
    for (std::size_t m = 0; m < spectral_size_; ++m) {
        double k2 = 0.0;
        bool cut = false;
        for (int a = 0; a < d; ++a) {
            const std::size_t n = grid.nodes[a];
            const long s = signed_index(idx[a], n);
            const double k = 2.0 * std::numbers::pi * static_cast<double>(s) / grid.periods[a];
            k2 += k * k;
            const bool nyquist = (n % 2 == 0) && idx[a] == n / 2;
            k_axis_[a][m] = nyquist ? 0.0 : k;
            if (3 * static_cast<std::size_t>(std::abs(s)) > n) cut = true;
        }
        k_squared_[m] = k2;
        dealias_mask_[m] = cut ? 1 : 0;
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < shape[a]) break;
            idx[a] = 0;
        }
    }
}

SpectralPlan::~SpectralPlan() {
    std::lock_guard lock(planner_mutex());
    if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void SpectralPlan::forward(std::span<const double> in, std::span<Complex> out) const {
    if (in.size() != real_size_ || out.size() != spectral_size_) {
        throw std::invalid_argument("SpectralPlan::forward: size mismatch");
    }
    // r2c leaves its input intact; FFTW's signature is just not const-correct.
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
}

void SpectralPlan::inverse(std::span<const Complex> in, std::span<double> out) const {
    if (in.size() != spectral_size_ || out.size() != real_size_) {
        throw std::invalid_argument("SpectralPlan::inverse: size mismatch");
    }
    std::vector<Complex> scratch(in.begin(), in.end());
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                         reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
    const double scale = 1.0 / static_cast<double>(real_size_);
    for (double& v : out) v *= scale;
}

std::shared_ptr<const SpectralPlan> spectral_plan(const GridSpec& grid) {
    static std::mutex cache_mutex;
    static std::map<std::pair<std::vector<std::size_t>, std::vector<double>>,
                    std::shared_ptr<const SpectralPlan>>
        cache;
    std::lock_guard lock(cache_mutex);
    auto key = std::make_pair(grid.nodes, grid.periods);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto plan = std::make_shared<const SpectralPlan>(grid);
    cache.emplace(std::move(key), plan);
    return plan;
}

}  // namespace yfl
