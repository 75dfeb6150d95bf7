#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "yfl/grid.hpp"
#include "yfl/rng.hpp"

namespace yfl::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Random real trigonometric polynomial sum_j a_j cos(k_j . x + p_j) on a
/// torus with the given periods. Derivatives are closed form.
struct TrigPoly {
    struct Mode {
        std::vector<double> k;
        double amp, phase;
    };
    double offset = 0.0;
    std::vector<Mode> modes;

    static TrigPoly random(int n, const std::vector<double>& periods, std::uint64_t seed, int max_mode,
                           int count = 5, double offset = 0.0) {
        Rng rng(seed, 77);
        TrigPoly p;
        p.offset = offset;
        for (int j = 0; j < count; ++j) {
            Mode m;
            m.k.resize(n);
            for (int a = 0; a < n; ++a) m.k[a] = kTwoPi * rng.integer(-max_mode, max_mode) / periods[a];
            m.amp = rng.uniform(-1.0, 1.0);
            m.phase = rng.uniform(0.0, kTwoPi);
            p.modes.push_back(m);
        }
        return p;
    }

    double arg(const Mode& m, std::span<const double> x) const {
        double s = m.phase;
        for (std::size_t a = 0; a < m.k.size(); ++a) s += m.k[a] * x[a];
        return s;
    }
    double value(std::span<const double> x) const {
        double s = offset;
        for (const auto& m : modes) s += m.amp * std::cos(arg(m, x));
        return s;
    }
    double laplacian(std::span<const double> x) const {
        double s = 0.0;
        for (const auto& m : modes) {
            double k2 = 0.0;
            for (double k : m.k) k2 += k * k;
            s -= k2 * m.amp * std::cos(arg(m, x));
        }
        return s;
    }
    double partial(std::span<const double> x, int axis) const {
        double s = 0.0;
        for (const auto& m : modes) s -= m.k[axis] * m.amp * std::sin(arg(m, x));
        return s;
    }
    ScalarField sample(const GridPtr& g) const {
        return ScalarField::from_function(g, [&](std::span<const double> x) { return value(x); });
    }
};

/// Eighth-order centred differences on a grid `refine` times finer than
/// `coarse`, evaluated at the coarse nodes. Independent of the library's
/// differentiation code.
struct FineDifferenceOracle {
    GridPtr coarse;
    int refine = 4;

    template <class F>
    ScalarField second_derivative_sum(F&& f) const {
        static constexpr double c[] = {-205.0 / 72.0, 8.0 / 5.0, -1.0 / 5.0, 8.0 / 315.0, -1.0 / 560.0};
        return ScalarField::from_function(coarse, [&](std::span<const double> x) {
            double s = 0.0;
            std::vector<double> y(x.begin(), x.end());
            for (int a = 0; a < coarse->dim; ++a) {
                const double h = coarse->spacing(a) / refine;
                double acc = c[0] * f(y);
                for (int j = 1; j <= 4; ++j) {
                    y[a] = x[a] + j * h;
                    double fp = f(y);
                    y[a] = x[a] - j * h;
                    double fm = f(y);
                    acc += c[j] * (fp + fm);
                }
                y[a] = x[a];
                s += acc / (h * h);
            }
            return s;
        });
    }

    template <class F>
    ScalarField first_derivative(F&& f, int axis) const {
        static constexpr double c[] = {0.0, 4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0};
        return ScalarField::from_function(coarse, [&](std::span<const double> x) {
            std::vector<double> y(x.begin(), x.end());
            const double h = coarse->spacing(axis) / refine;
            double acc = 0.0;
            for (int j = 1; j <= 4; ++j) {
                y[axis] = x[axis] + j * h;
                double fp = f(y);
                y[axis] = x[axis] - j * h;
                double fm = f(y);
                acc += c[j] * (fp - fm);
            }
            return acc / h;
        });
    }
};

inline double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

inline double rel_sup_error(const ScalarField& got, const ScalarField& want) {
    return max_abs(got - want) / std::max(max_abs(want), 1e-300);
}

}  // namespace yfl::test
