#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "paneitz/constructions/cutoff.hpp"
#include "paneitz/fields.hpp"
#include "paneitz/geometry.hpp"
#include "paneitz/paneitz.hpp"

namespace paneitz {

struct ExcisionBall {
    std::vector<double> center;
    double radius = 0.0;
};

/// One summand: a closed model, a nonnegative test function vanishing on the
/// ball that is removed to form the neck, and that ball.
struct ConnectedSumSide {
    MetricModel model;
    ScalarField u;
    ExcisionBall ball;
    /// Rigorous lower bound for λ(M_i, [g_i]); taken from
    /// lower_bound_constants when empty.
    std::optional<double> lambda_lower_bound;
};

struct ConnectedSumInput {
    ConnectedSumSide left;
    ConnectedSumSide right;
    /// ε budget; derived from the measured slack when empty.
    std::optional<double> epsilon;
};

struct ConnectedSumReport {
    std::array<double, 2> energy{};
    std::array<double, 2> mass{};
    std::array<double, 2> quotient{};
    std::array<double, 2> lambda_lower_bound{};

    double min_form = 0.0;
    double sum_form = 0.0;           // (℘₁ + ℘₂) 2^{-(n-4)/n}
    double sum_form_assembled = 0.0; // quotient of the glued unit-mass function
    double epsilon = 0.0;
    double epsilon1 = 0.0;

    bool min_form_certificate = false;  // min-form <= min(℘₁, ℘₂)
    bool min_form_within_budget = false; // min-form < min λ-bound + ε
    bool sum_form_identity = false;     // assembled == formula to 1e-12
    bool sides_within_budget = false;   // ℘_i < L_i + ε₁
    bool sum_form_within_budget = false; // sum-form < (L₁+L₂) 2^{-(n-4)/n} + ε
    bool epsilon_identity = false;      // (L₁+L₂+2ε₁) 2^{-q} == (L₁+L₂) 2^{-q} + ε
    bool lower_bounds_nonnegative = false;
    std::string regime;

    bool passed() const {
        return min_form_certificate && min_form_within_budget && sum_form_identity && sides_within_budget &&
               sum_form_within_budget && epsilon_identity;
    }
};

/// Largest |u| over grid nodes inside the ball, relative to sup |u|.
inline double relative_ball_max(const ScalarField& u, const ExcisionBall& ball) {
    const GridSpec& g = u.grid();
    const int n = g.dimension().value();
    if (static_cast<int>(ball.center.size()) != n) {
        throw PreconditionError("excision ball centre needs one coordinate per dimension");
    }
    const double sup = u.max_abs();
    double inside = 0.0;
    std::vector<double> x(n);
    for (std::size_t i = 0; i < u.size(); ++i) {
        g.coordinates(i, x);
        if (torus_distance(x, ball.center, g.side_lengths()) <= ball.radius) {
            inside = std::max(inside, std::abs(u[i]));
        }
    }
    return sup > 0.0 ? inside / sup : 0.0;
}

inline double two_power(double q) { return std::pow(2.0, q); }

/// Evaluates the connected-sum test functions. The glued manifold is never
/// built: both functions vanish on the identified balls, so energy and mass
/// of the glued function are the sums over the two sides.
inline ConnectedSumReport connected_sum_quotient(const ConnectedSumInput& in) {
    const Dimension n = model_dimension(in.left.model);
    if (model_dimension(in.right.model) != n) {
        throw PreconditionError("connected sum of manifolds of different dimensions");
    }
    const double p = to_double(exponents(n).critical_exponent);
    const double q = to_double(exponents(n).quotient_power);

    ConnectedSumReport r;
    std::array<ScalarField, 2> unit{in.left.u, in.right.u};
    const std::array<const ConnectedSumSide*, 2> sides{&in.left, &in.right};
    for (int i = 0; i < 2; ++i) {
        const ConnectedSumSide& s = *sides[i];
        if (s.u.min() < 0.0) {
            throw PreconditionError("connected-sum test functions must be nonnegative");
        }
        if (s.u.max_abs() == 0.0) {
            throw PreconditionError("connected-sum test function vanishes identically");
        }
        if (!(s.ball.radius > 0.0)) {
            throw PreconditionError("excision ball radius must be positive");
        }
        if (relative_ball_max(s.u, s.ball) > 1e-14) {
            throw PreconditionError("test function does not vanish on its excision ball");
        }
        const QuotientReport qr = functional(s.model, s.u);
        r.energy[i] = qr.numerator;
        r.mass[i] = qr.mass;
        r.quotient[i] = qr.quotient;
        r.lambda_lower_bound[i] =
            s.lambda_lower_bound ? *s.lambda_lower_bound : lower_bound_constants(s.model).bound;
        unit[i] = std::pow(qr.mass, -1.0 / p) * s.u;
    }

    r.min_form = std::min(r.energy[0] / std::pow(r.mass[0], q), r.energy[1] / std::pow(r.mass[1], q));
    r.sum_form = (r.quotient[0] + r.quotient[1]) / two_power(q);
    const double e_glued = energy(sides[0]->model, unit[0]) + energy(sides[1]->model, unit[1]);
    const double m_glued = critical_mass(sides[0]->model, unit[0]) + critical_mass(sides[1]->model, unit[1]);
    r.sum_form_assembled = e_glued / std::pow(m_glued, q);

    const double slack = std::max(r.quotient[0] - r.lambda_lower_bound[0], r.quotient[1] - r.lambda_lower_bound[1]);
    if (in.epsilon) {
        if (!(*in.epsilon > 0.0)) {
            throw PreconditionError("epsilon budget must be positive");
        }
        r.epsilon = *in.epsilon;
        r.epsilon1 = r.epsilon * two_power(q) / 2.0;
    } else {
        r.epsilon1 = std::max(slack, 0.0) * (1.0 + 1e-9) + 1e-12;
        r.epsilon = 2.0 * r.epsilon1 / two_power(q);
    }

    const double lsum = r.lambda_lower_bound[0] + r.lambda_lower_bound[1];
    const double lmin = std::min(r.lambda_lower_bound[0], r.lambda_lower_bound[1]);
    r.min_form_certificate = r.min_form <= std::min(r.quotient[0], r.quotient[1]);
    r.min_form_within_budget = r.min_form < lmin + r.epsilon;
    r.sum_form_identity =
        std::abs(r.sum_form_assembled - r.sum_form) <= 1e-12 * std::max(std::abs(r.sum_form), 1e-300);
    r.sides_within_budget = r.quotient[0] < r.lambda_lower_bound[0] + r.epsilon1 &&
                            r.quotient[1] < r.lambda_lower_bound[1] + r.epsilon1;
    r.sum_form_within_budget = r.sum_form < lsum / two_power(q) + r.epsilon;
    const double lhs = (lsum + 2.0 * r.epsilon1) / two_power(q);
    const double rhs = lsum / two_power(q) + r.epsilon;
    r.epsilon_identity = std::abs(lhs - rhs) <= 1e-12 * std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    r.lower_bounds_nonnegative = r.lambda_lower_bound[0] >= 0.0 && r.lambda_lower_bound[1] >= 0.0;
    r.regime = r.lower_bounds_nonnegative
                   ? "both constants certified >= 0 (positive-constant regime of the connected-sum lower bound)"
                   : "a constant may be negative (only the upper-bound connected-sum statements apply)";
    return r;
}

struct DisjointUnion {
    double value = 0.0;
    bool hypothesis_satisfied = true;
};

/// Paneitz constant of a disjoint union: the smaller of the two constants,
/// valid when both are nonnegative. Negative input is flagged, not rejected.
inline DisjointUnion disjoint_union_constant(double lambda1, double lambda2) {
    return {std::min(lambda1, lambda2), lambda1 >= 0.0 && lambda2 >= 0.0};
}

} // namespace paneitz
