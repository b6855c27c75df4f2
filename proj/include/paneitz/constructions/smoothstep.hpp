#pragma once

#include <algorithm>

namespace paneitz {

/// Quintic smoothstep 6x^5 - 15x^4 + 10x^3 clamped to [0, 1]: C² with
/// vanishing first and second derivatives at both ends.
inline double smoothstep5(double x) {
    x = std::clamp(x, 0.0, 1.0);
    return x * x * x * (x * (6.0 * x - 15.0) + 10.0);
}

inline double smoothstep5_d1(double x) {
    if (x <= 0.0 || x >= 1.0) {
        return 0.0;
    }
    return 30.0 * x * x * (x - 1.0) * (x - 1.0);
}

inline double smoothstep5_d2(double x) {
    if (x <= 0.0 || x >= 1.0) {
        return 0.0;
    }
    return 60.0 * x * (x - 1.0) * (2.0 * x - 1.0);
}

} // namespace paneitz
