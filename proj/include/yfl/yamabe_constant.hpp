#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "yfl/flow.hpp"

namespace yfl {

struct YamabeEstimateConfig {
    std::size_t starts = 4;
    double horizon = 0.2;
    double dt = 1e-4;
    /// Relative amplitude of the random perturbation of u = 1.
    double amplitude = 0.2;
    /// Highest Fourier index per axis used for random starts.
    int max_mode = 2;
    std::uint64_t seed = 1;
    Stepper stepper = Stepper::SemiImplicit;
    std::size_t threads = 1;
};

struct YamabeStartResult {
    std::size_t index = 0;
    double initial_quotient = 0.0;
    double final_quotient = 0.0;
    bool completed = false;
    std::string abort_reason;
};

struct YamabeEstimate {
    /// Smallest final quotient among completed runs: an upper bound on Y(M, g0).
    double value = 0.0;
    std::size_t best_start = 0;
    std::vector<YamabeStartResult> starts;
};

/// Smooth positive start: 1 + amplitude * (normalized random trigonometric
/// polynomial with modes up to max_mode), deterministic in (seed, index).
ScalarField random_smooth_start(const GridPtr& grid, std::uint64_t seed, std::size_t index,
                                double amplitude, int max_mode);

/// Runs the normalized flow from every start and keeps the lowest final
/// Yamabe quotient. Throws std::runtime_error when no run completes.
YamabeEstimate estimate_yamabe_constant(const BackgroundPtr& bg, const YamabeEstimateConfig& cfg);

/// Two estimates agree when |a - b| <= rel * max(|a|, |b|, Vol(g0)^{2/n}).
bool yamabe_batches_agree(double a, double b, double vol0, int n, double rel = 0.02);

}  // namespace yfl
