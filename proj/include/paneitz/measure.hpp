#pragma once

#include <cmath>
#include <numbers>

namespace paneitz {

/// Area of the unit k-sphere S^k in R^{k+1}: 2 π^{(k+1)/2} / Γ((k+1)/2).
inline double sphere_area(int k) {
    const double half = 0.5 * (k + 1);
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) {
    return sphere_area(n - 1) / n;
}

} // namespace paneitz
