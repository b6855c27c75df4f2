#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "paneitz/constructions/cylinder.hpp"
#include "paneitz/samples.hpp"

using namespace paneitz;

TEST(CylinderPositivity, FiveDimensional) {
    const auto p = cylinder_positivity(Dimension(5));
    EXPECT_NEAR(p.a_n_R, 6.5, 1e-14);
    EXPECT_NEAR(p.axial_eigenvalue, 6.5, 1e-14);
    EXPECT_NEAR(p.spherical_eigenvalue, 2.5, 1e-14);
    EXPECT_NEAR(p.Q, 25.0 / 16.0, 1e-14);
    EXPECT_TRUE(p.positive);
    EXPECT_GT(q_curvature(12.0, 48.0, 0.0, Dimension(5)), 0.0);
}

TEST(CylinderPositivity, AllDimensionsFiveToTen) {
    for (int k = 5; k <= 10; ++k) {
        const auto p = cylinder_positivity(Dimension(k));
        EXPECT_GT(p.Q, 0.0) << k;
        EXPECT_GT(p.spherical_eigenvalue, 0.0) << k;
        EXPECT_GT(p.axial_eigenvalue, 0.0) << k;
        EXPECT_TRUE(p.positive) << k;
    }
}

TEST(SliceFinder, ConstantDensity) {
    const auto d = ScalarField::axial(Dimension(5), 10.0, 101, [](double) { return 1.0; });
    const auto s = slice_finder(d);
    EXPECT_EQ(s.value, 1.0);
    EXPECT_NEAR(s.mean, 1.0, 1e-14);
}

TEST(SliceFinder, MonotoneDensity) {
    const auto d = ScalarField::axial(Dimension(5), 10.0, 101, [](double t) { return t; });
    const auto s = slice_finder(d);
    EXPECT_EQ(s.t, 0.0);
    EXPECT_EQ(s.value, 0.0);
    EXPECT_NEAR(s.mean, 5.0, 1e-12);
    EXPECT_LE(s.value, s.mean);
}

TEST(SliceFinder, RandomDensitiesProperty) {
    std::mt19937_64 rng(100);
    for (int trial = 0; trial < 100; ++trial) {
        const double l = samples::uniform(rng, 1.0, 40.0);
        const auto samples_count = static_cast<std::size_t>(samples::uniform(rng, 5.0, 400.0));
        const auto d = samples::density(Dimension(5), l, samples_count, rng);
        const auto s = slice_finder(d);
        EXPECT_LE(s.value, s.mean) << trial;
        EXPECT_GE(s.t, 0.0);
        EXPECT_LE(s.t, l + 1e-12);
    }
}

TEST(SliceFinder, Errors) {
    const auto neg = ScalarField::axial(Dimension(5), 1.0, 9, [](double t) { return t - 0.5; });
    EXPECT_THROW(slice_finder(neg), DomainError);
    const auto radial = ScalarField::radial(Dimension(5), 1.0, 64, [](double) { return 1.0; });
    EXPECT_THROW(slice_finder(radial), LayoutMismatch);
}

TEST(CylinderEnergyProfile, ConstantAndZero) {
    const Dimension n(5);
    const double l = 10.0;
    const double Q = curvature(Cylinder{n, l}).Q;
    const auto one = cylinder_energy_profile(n, l, ScalarField::axial(n, l, 101, [](double) { return 1.0; }));
    for (std::size_t i = 0; i < one.density.size(); ++i) {
        EXPECT_NEAR(one.density[i], sphere_area(4) * Q, 1e-12);
    }
    EXPECT_NEAR(one.total, sphere_area(4) * Q * l, 1e-11);
    const auto zero = cylinder_energy_profile(n, l, ScalarField::axial(n, l, 101, [](double) { return 0.0; }));
    EXPECT_EQ(zero.total, 0.0);
}

TEST(CylinderEnergyProfile, CosineAgainstAnalytic) {
    const Dimension n(6);
    const double l = 5.0;
    const double k = std::numbers::pi / l;
    const CurvatureData c = curvature(Cylinder{n, l});
    const double A = to_double(coefficients(n).a_n) * c.R;
    const double exact = sphere_area(5) * 0.5 * l * (k * k * k * k + A * k * k + c.Q);
    auto err = [&](std::size_t samples) {
        const auto u = ScalarField::axial(n, l, samples, [&](double t) { return std::cos(k * t); });
        return std::abs(cylinder_energy_profile(n, l, u).total - exact) / exact;
    };
    EXPECT_LT(err(401), 1e-4);
    EXPECT_GT(err(201) / err(401), 3.0);
}

TEST(CylinderEnergyProfile, PositiveOnRandomProfiles) {
    std::mt19937_64 rng(20);
    for (int trial = 0; trial < 20; ++trial) {
        const Dimension n(5 + trial % 4);
        const double l = samples::uniform(rng, 1.0, 20.0);
        const auto u = samples::axial_profile(n, l, 257, rng, false);
        ASSERT_GT(u.max_abs(), 0.0);
        const auto e = cylinder_energy_profile(n, l, u);
        EXPECT_GT(e.total, 0.0) << trial;
        EXPECT_GE(e.density.min(), 0.0) << trial;
    }
}

TEST(CylinderEnergyProfile, RejectsNonAxisymmetric) {
    const ScalarField skew(AxialProfile{Dimension(5), 2.0, false}, std::vector<double>(9, 1.0));
    EXPECT_THROW(cylinder_energy_profile(Dimension(5), 2.0, skew), UnsupportedVariant);
}

TEST(ExtendOverCollar, ClosedForm) {
    EXPECT_EQ(extend_over_collar(Dimension(5), 0.0).energy, 0.0);
    for (int k = 5; k <= 10; ++k) {
        const auto e = extend_over_collar(Dimension(k), 1.0);
        EXPECT_NEAR(e.energy, e.closed_form, 1e-12 * e.closed_form) << k;
    }
    const auto five = extend_over_collar(Dimension(5), 1.0);
    EXPECT_NEAR(five.closed_form, sphere_area(4) * (6.5 + 25.0 / 48.0), 1e-12);
    const auto doubled = extend_over_collar(Dimension(5), 2.0);
    EXPECT_NEAR(doubled.energy, 4.0 * five.energy, 1e-12 * doubled.energy);
}

TEST(CylinderSweep, LengthsReport) {
    const auto rows = cylinder_sweep(Dimension(5), {5.0, 10.0, 20.0, 40.0});
    ASSERT_EQ(rows.size(), 4u);
    for (const auto& r : rows) {
        EXPECT_GT(r.total, 0.0);
        EXPECT_LE(r.slice_value, r.mean);
        EXPECT_NEAR(r.mean, r.total / r.length, 1e-12 * r.mean);
        EXPECT_GE(r.slice_t, 0.0);
        EXPECT_LE(r.slice_t, r.length);
        EXPECT_GT(r.collar_energy, 0.0);
    }
    // unit critical mass spread over a longer neck: the cheapest slice gets cheaper
    EXPECT_LT(rows.back().slice_value, rows.front().slice_value);
    EXPECT_THROW(cylinder_sweep(Dimension(5), {0.0}), PreconditionError);
}
