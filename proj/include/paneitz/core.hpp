#pragma once

#include <cstdint>
#include <string>

#include <boost/rational.hpp>

#include "paneitz/errors.hpp"

namespace paneitz {

using Rational = boost::rational<std::int64_t>;

inline double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

/// Manifold dimension. Every fourth-order formula divides by n - 4, so only
/// n >= 5 is representable.
class Dimension {
public:
    explicit Dimension(int n) : n_(n) {
        if (n < 5) {
            throw DimensionError("dimension must be >= 5, got " + std::to_string(n));
        }
    }

    int value() const noexcept { return n_; }
    operator int() const noexcept { return n_; }

    friend bool operator==(Dimension, Dimension) = default;

private:
    int n_;
};

struct ConformalExponents {
    Rational critical_exponent; // 2n/(n-4)
    Rational metric_power;      // 4/(n-4)
    Rational equation_power;    // (n+4)/(n-4)
    Rational quotient_power;    // (n-4)/n
};

inline ConformalExponents exponents(Dimension dim) {
    const std::int64_t n = dim.value();
    return {Rational(2 * n, n - 4), Rational(4, n - 4), Rational(n + 4, n - 4),
            Rational(n - 4, n)};
}

/// Coefficients of the Paneitz-Branson operator and of the Q-curvature,
///
///   Q = -q_lap ΔR + q_scal R^2 - q_ric |Ric|^2,
///   P = Δ^2 - div((a_n R g - ricci_coeff Ric) d) + Q.
///
/// q_ric is (n-4)/(n-2)^2, the value for which Q of the round sphere is the
/// zeroth-order term of P making P covariant, i.e. Q = (n-4)/2 times
/// Branson's Q. With it Q(S^n) = n(n^2-4)(n-4)/16.
struct PaneitzCoefficients {
    Rational a_n;
    Rational ricci_coeff;
    Rational q_lap_coeff;
    Rational q_scal_coeff;
    Rational q_ric_coeff;
};

inline PaneitzCoefficients coefficients(Dimension dim) {
    const std::int64_t n = dim.value();
    const std::int64_t nm1 = n - 1;
    const std::int64_t nm2 = n - 2;
    const std::int64_t nm4 = n - 4;
    return {
        Rational(nm2 * nm2 + 4, 2 * nm1 * nm2),
        Rational(4, nm2),
        Rational(nm4, 4 * nm1),
        Rational(nm4 * (n * n * n - 4 * n * n + 16 * n - 16), 16 * nm1 * nm1 * nm2 * nm2),
        Rational(nm4, nm2 * nm2),
    };
}

} // namespace paneitz
