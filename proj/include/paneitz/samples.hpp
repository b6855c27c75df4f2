#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "paneitz/fields.hpp"

// Seeded generators for the randomized suites. std::mt19937_64 output is fixed
// by the standard; the draws below only use it through generate_canonical.

namespace paneitz::samples {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * std::generate_canonical<double, 53>(rng);
}

/// 1 + Σ a_k cos(2π m_k·x / L + φ_k) with Σ|a_k| <= amplitude < 1 and a few
/// low-frequency modes: smooth, positive, periodic.
inline ScalarField trig_field(const GridSpec& grid, std::mt19937_64& rng, int modes = 4, double amplitude = 0.6) {
    const int n = grid.dimension().value();
    std::vector<std::vector<int>> freq(modes, std::vector<int>(n));
    std::vector<double> amp(modes);
    std::vector<double> phase(modes);
    double total = 0.0;
    for (int k = 0; k < modes; ++k) {
        for (int d = 0; d < n; ++d) {
            freq[k][d] = static_cast<int>(std::floor(uniform(rng, -2.0, 3.0)));
        }
        amp[k] = uniform(rng, 0.1, 1.0);
        phase[k] = uniform(rng, 0.0, 2.0 * std::numbers::pi);
        total += amp[k];
    }
    for (double& a : amp) {
        a *= amplitude / total;
    }
    const auto& sides = grid.side_lengths();
    return ScalarField::on_grid(grid, [&](std::span<const double> x) {
        double v = 1.0;
        for (int k = 0; k < modes; ++k) {
            double arg = phase[k];
            for (int d = 0; d < n; ++d) {
                arg += 2.0 * std::numbers::pi * freq[k][d] * x[d] / sides[d];
            }
            v += amp[k] * std::cos(arg);
        }
        return v;
    });
}

/// Independent uniform values in [-1, 1] at every node.
inline ScalarField noise_field(const GridSpec& grid, std::mt19937_64& rng) {
    std::vector<double> v(grid.total_points());
    for (double& x : v) {
        x = uniform(rng, -1.0, 1.0);
    }
    return ScalarField(PeriodicGrid{grid}, std::move(v));
}

/// Smooth t-profile c0 + Σ_k (a_k cos(kπt/l) + b_k sin(kπt/l)). With
/// nonnegative = true the constant term dominates so the profile is > 0.
inline ScalarField axial_profile(Dimension n, double length, std::size_t samples, std::mt19937_64& rng,
                                 bool nonnegative, int modes = 5) {
    std::vector<double> a(modes);
    std::vector<double> b(modes);
    double total = 0.0;
    for (int k = 0; k < modes; ++k) {
        a[k] = uniform(rng, -1.0, 1.0);
        b[k] = uniform(rng, -1.0, 1.0);
        total += std::abs(a[k]) + std::abs(b[k]);
    }
    const double c0 = nonnegative ? total + uniform(rng, 0.05, 1.0) : uniform(rng, -1.0, 1.0);
    return ScalarField::axial(n, length, samples, [&](double t) {
        double v = c0;
        for (int k = 0; k < modes; ++k) {
            const double w = (k + 1) * std::numbers::pi * t / length;
            v += a[k] * std::cos(w) + b[k] * std::sin(w);
        }
        return v;
    });
}

/// Nonnegative density on [0, l] with independent uniform values in [0, 1).
inline ScalarField density(Dimension n, double length, std::size_t samples, std::mt19937_64& rng) {
    std::vector<double> v(samples);
    for (double& x : v) {
        x = uniform(rng, 0.0, 1.0);
    }
    return ScalarField(AxialProfile{n, length}, std::move(v));
}

} // namespace paneitz::samples
