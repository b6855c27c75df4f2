#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "paneitz/geometry.hpp"

using namespace paneitz;

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
}

TEST(Curvature, FlatTorusVanishes) {
    const CurvatureData c = curvature(FlatTorus::cube(Dimension(5), two_pi));
    EXPECT_EQ(c.R, 0.0);
    EXPECT_EQ(c.ricci_tangent, 0.0);
    EXPECT_EQ(c.ricci_normal, 0.0);
    EXPECT_EQ(c.ric_norm_sq, 0.0);
    EXPECT_EQ(c.lap_R, 0.0);
    EXPECT_EQ(c.Q, 0.0);
}

TEST(Curvature, RoundSphereFive) {
    const CurvatureData c = curvature(RoundSphere{Dimension(5)});
    EXPECT_DOUBLE_EQ(c.R, 20.0);
    EXPECT_DOUBLE_EQ(c.ricci_tangent, 4.0);
    EXPECT_DOUBLE_EQ(c.ricci_normal, 4.0);
    EXPECT_DOUBLE_EQ(c.ric_norm_sq, 80.0);
    EXPECT_EQ(c.lap_R, 0.0);
    EXPECT_DOUBLE_EQ(c.Q, q_curvature(20.0, 80.0, 0.0, Dimension(5)));
    EXPECT_NEAR(c.Q, 105.0 / 16.0, 1e-13);
}

TEST(Curvature, RoundSphereRadiusScaling) {
    const CurvatureData c = curvature(RoundSphere{Dimension(6), 2.0});
    EXPECT_DOUBLE_EQ(c.R, 30.0 / 4.0);
    EXPECT_DOUBLE_EQ(c.ricci_tangent, 5.0 / 4.0);
    const CurvatureData unit = curvature(RoundSphere{Dimension(6)});
    EXPECT_NEAR(c.Q, unit.Q / 16.0, 1e-13);
}

TEST(Curvature, CylinderFive) {
    const CurvatureData c = curvature(Cylinder{Dimension(5), 10.0});
    EXPECT_DOUBLE_EQ(c.R, 12.0);
    EXPECT_DOUBLE_EQ(c.ricci_tangent, 3.0);
    EXPECT_EQ(c.ricci_normal, 0.0);
    EXPECT_DOUBLE_EQ(c.ric_norm_sq, 36.0);
    EXPECT_NEAR(c.Q, 25.0 / 16.0, 1e-13);
    EXPECT_GT(c.Q, 0.0);
}

TEST(Curvature, CylinderTableAllDimensions) {
    for (int k = 5; k <= 12; ++k) {
        const CurvatureData c = curvature(Cylinder{Dimension(k), 1.0});
        EXPECT_DOUBLE_EQ(c.R, (k - 1.0) * (k - 2.0));
        EXPECT_DOUBLE_EQ(c.ric_norm_sq, (k - 1.0) * (k - 2.0) * (k - 2.0));
        EXPECT_GT(c.Q, 0.0) << k;
    }
}

TEST(Curvature, ConformalToFlatUnsupported) {
    const GridSpec g = GridSpec::cube(Dimension(5), 8, two_pi);
    const ConformalToFlat m{Dimension(5), g.side_lengths(), ScalarField::on_grid(g, [](auto) { return 1.0; })};
    EXPECT_THROW(curvature(m), UnsupportedVariant);
}

TEST(Curvature, InvalidModels) {
    EXPECT_THROW(curvature(Cylinder{Dimension(5), 0.0}), PreconditionError);
    EXPECT_THROW(curvature(RoundSphere{Dimension(5), -1.0}), PreconditionError);
    EXPECT_THROW(curvature(FlatTorus{Dimension(5), {1.0, 1.0}}), PreconditionError);
}

TEST(QCurvature, Examples) {
    EXPECT_EQ(q_curvature(0.0, 0.0, 0.0, Dimension(5)), 0.0);
    // (1/16)·400·89/(16·9) - (1/9)·80 = 105/16
    EXPECT_NEAR(q_curvature(20.0, 80.0, 0.0, Dimension(5)), 105.0 / 16.0, 1e-13);
    EXPECT_GT(q_curvature(12.0, 48.0, 0.0, Dimension(5)), 0.0);
    EXPECT_NEAR(q_curvature(0.0, 0.0, 16.0, Dimension(5)), -1.0, 1e-15);
}

TEST(QCurvature, SpherePositiveAndClosedForm) {
    for (int k = 5; k <= 10; ++k) {
        const double Q = curvature(RoundSphere{Dimension(k)}).Q;
        EXPECT_GT(Q, 0.0) << k;
        EXPECT_NEAR(Q, k * (k * k - 4.0) * (k - 4.0) / 16.0, 1e-12 * Q) << k;
    }
}

TEST(Volume, Models) {
    EXPECT_NEAR(volume(RoundSphere{Dimension(5)}), std::pow(std::numbers::pi, 3.0), 1e-12);
    EXPECT_NEAR(volume(FlatTorus::cube(Dimension(5), two_pi)), std::pow(two_pi, 5), 1e-9);
    EXPECT_NEAR(volume(Cylinder{Dimension(5), 10.0}), 80.0 * std::numbers::pi * std::numbers::pi / 3.0, 1e-11);
}

TEST(QOfConformal, ConstantsGiveZero) {
    const GridSpec g = GridSpec::cube(Dimension(5), 8, two_pi);
    for (double c : {1.0, 0.3, 7.5}) {
        const auto q = q_of_conformal(ScalarField::on_grid(g, [c](auto) { return c; }), Dimension(5));
        EXPECT_EQ(q.max_abs(), 0.0);
    }
}

TEST(QOfConformal, CosinePerturbation) {
    auto error = [](int points) {
        const GridSpec g = GridSpec::cube(Dimension(5), points, two_pi);
        const auto u = ScalarField::on_grid(g, [](auto x) { return 1.0 + 0.1 * std::cos(x[0]); });
        const auto q = q_of_conformal(u, Dimension(5));
        double e = 0.0;
        std::vector<double> x(5);
        for (std::size_t i = 0; i < u.size(); ++i) {
            g.coordinates(i, x);
            const double exact = std::pow(1.0 + 0.1 * std::cos(x[0]), -9.0) * 0.1 * std::cos(x[0]);
            e = std::max(e, std::abs(q[i] - exact));
        }
        return e;
    };
    const double coarse = error(8);
    const double fine = error(16);
    EXPECT_LT(fine, 0.02);
    EXPECT_GT(coarse / fine, 3.5);
}

TEST(QOfConformal, TotalQMatchesEnergy) {
    // ∫ Q[g_u] dv_{g_u} = ∫ Q[g_u] u^{2n/(n-4)} dx = ∫ u Δ²u dx
    const GridSpec g = GridSpec::cube(Dimension(5), 12, two_pi);
    const auto u = ScalarField::on_grid(g, [](auto x) { return 1.0 + 0.2 * std::sin(x[1]) * std::cos(x[3]); });
    const auto q = q_of_conformal(u, Dimension(5));
    const double lhs = inner(q, u.map([](double v) { return std::pow(v, 10.0); }));
    const double rhs = inner(u, bilaplacian(u));
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(rhs));
}

TEST(QOfConformal, RejectsNonPositive) {
    const GridSpec g = GridSpec::cube(Dimension(5), 8, two_pi);
    EXPECT_THROW(q_of_conformal(ScalarField::on_grid(g, [](auto x) { return std::cos(x[0]); }), Dimension(5)),
                 DomainError);
    EXPECT_THROW(q_of_conformal(ScalarField::on_grid(g, [](auto) { return 1.0; }), Dimension(6)), LayoutMismatch);
}
