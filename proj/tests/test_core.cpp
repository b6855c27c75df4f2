#include <gtest/gtest.h>

#include "paneitz/core.hpp"
#include "paneitz/errors.hpp"
#include "paneitz/geometry.hpp"

using namespace paneitz;

TEST(Dimension, RejectsBelowFive) {
    EXPECT_THROW(Dimension(4), DimensionError);
    EXPECT_THROW(Dimension(0), DimensionError);
    EXPECT_THROW(Dimension(-3), DimensionError);
    EXPECT_EQ(Dimension(5).value(), 5);
}

TEST(Exponents, FiveDimensional) {
    const auto e = exponents(Dimension(5));
    EXPECT_EQ(e.critical_exponent, Rational(10));
    EXPECT_EQ(e.equation_power, Rational(9));
    EXPECT_EQ(e.metric_power, Rational(4));
    EXPECT_EQ(e.quotient_power, Rational(1, 5));
}

TEST(Exponents, EightDimensional) {
    const auto e = exponents(Dimension(8));
    EXPECT_EQ(e.critical_exponent, Rational(4));
    EXPECT_EQ(e.metric_power, Rational(1));
}

TEST(Coefficients, FiveDimensional) {
    const auto c = coefficients(Dimension(5));
    EXPECT_EQ(c.a_n, Rational(13, 24));
    EXPECT_EQ(c.ricci_coeff, Rational(4, 3));
    EXPECT_EQ(c.q_lap_coeff, Rational(1, 16));
    EXPECT_EQ(c.q_scal_coeff, Rational(89, 2304));
}

TEST(Coefficients, RicciTermSixDimensional) {
    // (n-4)/(n-2)^2; see the README note on this coefficient.
    EXPECT_EQ(coefficients(Dimension(6)).q_ric_coeff, Rational(1, 8));
}

TEST(Core, RationalIdentitiesExhaustive) {
    for (int k = 5; k <= 64; ++k) {
        const Dimension n(k);
        const auto e = exponents(n);
        EXPECT_EQ(e.equation_power + 1, e.critical_exponent) << k;
        EXPECT_EQ(e.critical_exponent * e.quotient_power, Rational(2)) << k;
        EXPECT_EQ(e.metric_power, e.critical_exponent - Rational(2 * (k - 2), k - 4)) << k;
        EXPECT_EQ(e.critical_exponent, Rational(2 * k, k - 4)) << k;
        const auto c = coefficients(n);
        EXPECT_GT(c.a_n, 0) << k;
        EXPECT_GT(c.ricci_coeff, 0) << k;
        EXPECT_GT(c.q_lap_coeff, 0) << k;
        EXPECT_GT(c.q_scal_coeff, 0) << k;
        EXPECT_GT(c.q_ric_coeff, 0) << k;
        EXPECT_EQ(c.a_n, Rational((k - 2) * (k - 2) + 4, 2 * (k - 1) * (k - 2))) << k;
        EXPECT_EQ(q_curvature(0.0, 0.0, 0.0, n), 0.0) << k;
    }
}

TEST(Core, ToDouble) {
    EXPECT_DOUBLE_EQ(to_double(Rational(13, 24)), 13.0 / 24.0);
}
