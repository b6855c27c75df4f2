#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "paneitz/constructions/bubble.hpp"

using namespace paneitz;

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// ∫(Δs)² / (∫ s^{2n/(n-4)})^{(n-4)/n} for s = (2/(1+|x|²))^{(n-4)/2}, frozen from an
// independent 50-digit quadrature of the same integrals.
struct Frozen {
    int n;
    double quotient;
};
constexpr Frozen frozen_oracles[] = {{5, 102.38327344058}, {6, 247.28444736616}, {7, 431.53266467866}};

} // namespace

TEST(Bubble, ValueAtOrigin) {
    for (int k : {5, 6, 7}) {
        const double eps = 0.1;
        const BubbleParams p{eps, Dimension(k)};
        EXPECT_NEAR(bubble_value(0.0, p) / std::pow(2.0 / (eps * eps * eps), 0.5 * (k - 4)), 1.0, 1e-14) << k;
        const auto f = bubble(p);
        EXPECT_NEAR(f[0] / bubble_value(0.0, p), 1.0, 1e-14);
    }
}

TEST(Bubble, ValueAtEpsilon) {
    const BubbleParams p{0.1, Dimension(5)};
    EXPECT_NEAR(bubble_value(0.1, p), std::sqrt(2e-3 / (1e-6 + 1e-2)), 1e-14);
}

TEST(Bubble, SupportRangeAndSmoothness) {
    const BubbleParams p{0.2, Dimension(5)};
    EXPECT_EQ(bubble_value(0.4, p), 0.0);
    EXPECT_EQ(bubble_value(1.0, p), 0.0);
    const auto f = bubble(p);
    EXPECT_GE(f.min(), 0.0);
    // C² joins at ε and 2ε: derivative jumps across the join vanish like h.
    for (double r0 : {0.2, 0.4}) {
        auto jump = [&](double h, int order) {
            auto d = [&](double r) {
                if (order == 1) {
                    return (bubble_value(r + h, p) - bubble_value(r - h, p)) / (2 * h);
                }
                return (bubble_value(r + h, p) - 2.0 * bubble_value(r, p) + bubble_value(r - h, p)) / (h * h);
            };
            return std::abs(d(r0 + 2 * h) - d(r0 - 2 * h));
        };
        for (int order : {1, 2}) {
            EXPECT_LT(jump(5e-5, order), 0.6 * jump(1e-4, order)) << r0 << " " << order;
        }
    }
}

TEST(Bubble, Preconditions) {
    EXPECT_THROW(bubble(BubbleParams{0.6, Dimension(5)}), RangeError);
    EXPECT_THROW(bubble(BubbleParams{0.0, Dimension(5)}), RangeError);
    EXPECT_THROW(bubble(BubbleParams{-0.1, Dimension(5)}), RangeError);
    const FlatTorus small = FlatTorus::cube(Dimension(5), 1.0);
    EXPECT_THROW(bubble_quotient(BubbleParams{0.2, Dimension(5)}, small, 1.0), RangeError);
    const FlatTorus six = FlatTorus::cube(Dimension(6), two_pi);
    EXPECT_THROW(bubble_quotient(BubbleParams{0.2, Dimension(5)}, six, 1.0), LayoutMismatch);
}

TEST(EuclideanBubble, FrozenOracles) {
    for (const Frozen& f : frozen_oracles) {
        const auto b = euclidean_bubble_quotient(Dimension(f.n));
        EXPECT_NEAR(b.quotient, f.quotient, 1e-9 * f.quotient) << f.n;
        EXPECT_LT(b.error_estimate, 1e-9 * f.quotient) << f.n;
    }
}

TEST(EuclideanBubble, MassClosedForm) {
    // ∫ (2/(1+|x|²))^n dx = vol(S^n), the pull-back of the round volume.
    for (int k : {5, 6, 7, 9}) {
        EXPECT_NEAR(euclidean_bubble_quotient(Dimension(k)).mass, sphere_area(k), 1e-10 * sphere_area(k)) << k;
    }
}

TEST(SphereConstant, TwoOracleAgreement) {
    for (int k : {5, 6, 7}) {
        const double a = euclidean_bubble_quotient(Dimension(k)).quotient;
        const double b = sphere_constant_intrinsic(Dimension(k));
        EXPECT_LE(std::abs(a - b) / b, 0.005) << k;
    }
}

TEST(SphereConstant, PositiveAndClosedForm) {
    for (int k = 5; k <= 10; ++k) {
        const double v = sphere_constant_intrinsic(Dimension(k));
        EXPECT_GT(v, 0.0) << k;
        const double Q = k * (k * k - 4.0) * (k - 4.0) / 16.0;
        EXPECT_NEAR(v, Q * std::pow(sphere_area(k), 4.0 / k), 1e-12 * v) << k;
    }
}

TEST(BubbleQuotient, MassConvergesToEuclideanMass) {
    const Dimension n(5);
    const double oracle = euclidean_bubble_quotient(n).mass;
    double previous = INFINITY;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const double m = lp_mass(bubble(BubbleParams{eps, n}), exponents(n).critical_exponent);
        const double err = std::abs(m - oracle) / oracle;
        EXPECT_LT(err, previous) << eps;
        previous = err;
    }
    EXPECT_LT(previous, 1e-5);
}

TEST(BubbleQuotient, SweepFinitePositiveAndConverging) {
    const Dimension n(5);
    const FlatTorus host = FlatTorus::cube(n, two_pi);
    const double oracle = euclidean_bubble_quotient(n).quotient;
    double previous = INFINITY;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const auto r = bubble_quotient(BubbleParams{eps, n}, host, oracle);
        EXPECT_TRUE(std::isfinite(r.quotient.quotient));
        EXPECT_GT(r.quotient.quotient, 0.0);
        EXPECT_GT(r.transition_energy, 0.0);
        EXPECT_LT(r.rel_err, previous) << eps;
        previous = r.rel_err;
    }
}

TEST(BubbleQuotient, WithinTwoPercentAtEpsilonFiveHundredths) {
    const Dimension n(5);
    const auto r = bubble_quotient(BubbleParams{0.05, n}, FlatTorus::cube(n, two_pi));
    EXPECT_LE(r.rel_err, 0.02);
}

TEST(BubbleQuotient, ExcessIsTransitionEnergy) {
    // For n = 5 the excess over the oracle is carried by the annulus: it scales
    // like ε², so halving ε divides the quotient error by four.
    const Dimension n(5);
    const FlatTorus host = FlatTorus::cube(n, two_pi);
    const double oracle = euclidean_bubble_quotient(n).quotient;
    const auto a = bubble_quotient(BubbleParams{0.05, n}, host, oracle);
    const auto b = bubble_quotient(BubbleParams{0.025, n}, host, oracle);
    EXPECT_NEAR(a.rel_err / b.rel_err, 4.0, 0.1);
    EXPECT_NEAR(a.transition_energy / b.transition_energy, 4.0, 0.1);
    EXPECT_LE(b.rel_err, 0.02);
}
