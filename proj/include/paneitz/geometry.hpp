#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "paneitz/core.hpp"
#include "paneitz/fields.hpp"
#include "paneitz/measure.hpp"

namespace paneitz {

struct RoundSphere {
    Dimension n;
    double radius = 1.0;
};

struct FlatTorus {
    Dimension n;
    std::vector<double> side_lengths;

    static FlatTorus cube(Dimension n, double side) { return {n, std::vector<double>(n.value(), side)}; }
};

/// [0, length] x S^{n-1}(1) with the product metric.
struct Cylinder {
    Dimension n;
    double length;
};

/// u^{4/(n-4)} times the flat metric on a torus.
struct ConformalToFlat {
    Dimension n;
    std::vector<double> side_lengths;
    ScalarField factor;
};

using MetricModel = std::variant<RoundSphere, FlatTorus, Cylinder, ConformalToFlat>;

inline Dimension model_dimension(const MetricModel& m) {
    return std::visit([](const auto& v) { return v.n; }, m);
}

inline std::string model_name(const MetricModel& m) {
    return std::visit(
        [](const auto& v) -> std::string {
            using M = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<M, RoundSphere>) {
                return "sphere";
            } else if constexpr (std::is_same_v<M, FlatTorus>) {
                return "torus";
            } else if constexpr (std::is_same_v<M, Cylinder>) {
                return "cylinder";
            } else {
                return "conformal-to-flat";
            }
        },
        m);
}

inline void validate_model(const MetricModel& m) {
    std::visit(
        [](const auto& v) {
            using M = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<M, RoundSphere>) {
                if (!(v.radius > 0.0)) {
                    throw PreconditionError("sphere radius must be positive");
                }
            } else if constexpr (std::is_same_v<M, FlatTorus>) {
                if (static_cast<int>(v.side_lengths.size()) != v.n.value()) {
                    throw PreconditionError("torus needs one side length per dimension");
                }
                for (double s : v.side_lengths) {
                    if (!(s > 0.0)) {
                        throw PreconditionError("torus side lengths must be positive");
                    }
                }
            } else if constexpr (std::is_same_v<M, Cylinder>) {
                if (!(v.length > 0.0)) {
                    throw PreconditionError("cylinder length must be positive");
                }
            } else {
                const GridSpec& g = v.factor.grid();
                if (g.dimension() != v.n || g.side_lengths() != v.side_lengths) {
                    throw LayoutMismatch("conformal factor grid does not match the torus");
                }
                if (!(v.factor.min() > 0.0)) {
                    throw DomainError("conformal factor must be strictly positive");
                }
            }
        },
        m);
}

/// Riemannian volume of the model.
inline double volume(const MetricModel& m) {
    return std::visit(
        [](const auto& v) -> double {
            using M = std::decay_t<decltype(v)>;
            const int n = v.n.value();
            if constexpr (std::is_same_v<M, RoundSphere>) {
                return sphere_area(n) * std::pow(v.radius, n);
            } else if constexpr (std::is_same_v<M, FlatTorus>) {
                double vol = 1.0;
                for (double s : v.side_lengths) {
                    vol *= s;
                }
                return vol;
            } else if constexpr (std::is_same_v<M, Cylinder>) {
                return sphere_area(n - 1) * v.length;
            } else {
                return lp_mass(v.factor, exponents(v.n).critical_exponent);
            }
        },
        m);
}

/// Curvature of a model whose Ricci tensor is diagonal with two eigenvalues:
/// ricci_tangent along the round-sphere directions, ricci_normal along the
/// flat (axial or torus) directions.
struct CurvatureData {
    double R = 0.0;
    double ricci_tangent = 0.0;
    double ricci_normal = 0.0;
    double ric_norm_sq = 0.0;
    double lap_R = 0.0;
    double Q = 0.0;
};

inline double q_curvature(double R, double ric_norm_sq, double lap_R, Dimension n) {
    const PaneitzCoefficients c = coefficients(n);
    return -to_double(c.q_lap_coeff) * lap_R + to_double(c.q_scal_coeff) * R * R -
           to_double(c.q_ric_coeff) * ric_norm_sq;
}

inline CurvatureData curvature(const MetricModel& m) {
    validate_model(m);
    return std::visit(
        [](const auto& v) -> CurvatureData {
            using M = std::decay_t<decltype(v)>;
            const double n = v.n.value();
            CurvatureData c;
            if constexpr (std::is_same_v<M, RoundSphere>) {
                const double k = 1.0 / (v.radius * v.radius);
                c.R = n * (n - 1) * k;
                c.ricci_tangent = (n - 1) * k;
                c.ricci_normal = (n - 1) * k;
                c.ric_norm_sq = n * (n - 1) * (n - 1) * k * k;
            } else if constexpr (std::is_same_v<M, FlatTorus>) {
                // all zero
            } else if constexpr (std::is_same_v<M, Cylinder>) {
                c.R = (n - 1) * (n - 2);
                c.ricci_tangent = n - 2;
                c.ricci_normal = 0.0;
                c.ric_norm_sq = (n - 1) * (n - 2) * (n - 2);
            } else {
                throw UnsupportedVariant(
                    "curvature of a conformal-to-flat metric is not tabulated; use q_of_conformal");
            }
            c.lap_R = 0.0;
            c.Q = q_curvature(c.R, c.ric_norm_sq, c.lap_R, v.n);
            return c;
        },
        m);
}

/// Q-curvature of g_u = u^{4/(n-4)} g_flat on the torus grid of u:
/// Q[g_u] = u^{-(n+4)/(n-4)} Δ²u.
inline ScalarField q_of_conformal(const ScalarField& u, Dimension n) {
    const GridSpec& g = u.grid();
    if (g.dimension() != n) {
        throw LayoutMismatch("conformal factor lives on a grid of a different dimension");
    }
    if (!(u.min() > 0.0)) {
        throw DomainError("conformal factor must be strictly positive");
    }
    const double power = -to_double(exponents(n).equation_power);
    const ScalarField b = bilaplacian(u);
    std::vector<double> q(u.size());
    parallel_for(q.size(), [&](std::size_t i) { q[i] = std::pow(u[i], power) * b[i]; });
    return u.with_values(std::move(q));
}

} // namespace paneitz
