#pragma once

#include <cstddef>

#include "paneitz/errors.hpp"
#include "paneitz/parallel.hpp"

namespace paneitz::quadrature {

/// Composite Simpson weight of sample i out of `count` equispaced samples with
/// spacing h. An odd number of intervals closes with the 3/8 rule on the last
/// three. All weights are positive and sum to (count - 1) h.
inline double simpson_weight(std::size_t i, std::size_t count, double h) {
    if (count < 2) {
        throw DegenerateInput("quadrature needs at least two samples");
    }
    const std::size_t intervals = count - 1;
    if (intervals == 1) {
        return 0.5 * h;
    }
    if (intervals == 2) {
        return (i == 1 ? 4.0 : 1.0) * h / 3.0;
    }
    const bool tail38 = intervals % 2 == 1;
    const std::size_t simpson_end = tail38 ? intervals - 3 : intervals;
    double w = 0.0;
    if (i <= simpson_end && simpson_end > 0) {
        if (i == 0 || i == simpson_end) {
            w += h / 3.0;
        } else {
            w += (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
        }
    }
    if (tail38 && i >= simpson_end) {
        const std::size_t k = i - simpson_end;
        w += (k == 0 || k == 3 ? 1.0 : 3.0) * 3.0 * h / 8.0;
    }
    return w;
}

/// Simpson quadrature of sample(i), i in [0, count), on a uniform mesh.
template <class Sample>
double simpson(std::size_t count, double h, const Sample& sample) {
    return pairwise_sum(count, [&](std::size_t i) { return simpson_weight(i, count, h) * sample(i); });
}

} // namespace paneitz::quadrature
