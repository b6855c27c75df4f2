#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "paneitz/constructions/smoothstep.hpp"
#include "paneitz/core.hpp"
#include "paneitz/fields.hpp"
#include "paneitz/geometry.hpp"
#include "paneitz/measure.hpp"
#include "paneitz/paneitz.hpp"

namespace paneitz {

enum class Transition { QuinticSmoothstep };

struct BubbleParams {
    double epsilon;
    Dimension n;
    Transition smoothing = Transition::QuinticSmoothstep;
    double epsilon_max = 0.5;
    /// Samples per core width ε³ of the bubble.
    double core_resolution = 40.0;
};

/// (2ε³ / (ε⁶ + r²))^{(n-4)/2}: the standard bubble rescaled by x -> x/ε³.
inline double bubble_core(double r, double epsilon, int n) {
    const double e3 = epsilon * epsilon * epsilon;
    return std::pow(2.0 * e3 / (e3 * e3 + r * r), 0.5 * (n - 4));
}

/// Bubble on B_ε, zero outside B_{2ε}, multiplied by 1 - S((r-ε)/ε) on the
/// annulus so the join at r = ε is C² and the profile stays nonnegative.
inline double bubble_value(double r, const BubbleParams& p) {
    if (r >= 2.0 * p.epsilon) {
        return 0.0;
    }
    const double core = bubble_core(r, p.epsilon, p.n.value());
    if (r <= p.epsilon) {
        return core;
    }
    return core * (1.0 - smoothstep5((r - p.epsilon) / p.epsilon));
}

inline void validate(const BubbleParams& p) {
    if (!(p.epsilon > 0.0) || p.epsilon > p.epsilon_max) {
        throw RangeError("bubble epsilon must lie in (0, " + std::to_string(p.epsilon_max) + "]");
    }
    if (!(p.core_resolution > 0.0)) {
        throw PreconditionError("core_resolution must be positive");
    }
}

inline ScalarField bubble(const BubbleParams& p) {
    validate(p);
    const double eps = p.epsilon;
    const double h = std::min(eps * eps * eps / p.core_resolution, eps / 400.0);
    const double r_max = 2.2 * eps;
    const auto samples = std::max<std::size_t>(min_radial_samples, static_cast<std::size_t>(std::ceil(r_max / h)) + 1);
    return ScalarField::radial(p.n, r_max, samples, [&](double r) { return bubble_value(r, p); });
}

/// Euclidean reference value ∫|Δs|² / (∫ s^{2n/(n-4)})^{(n-4)/n} for
/// s = (2/(1+|x|²))^{(n-4)/2}, integrated over [0, ∞) through r = t/(1-t).
struct EuclideanBubble {
    double quotient = 0.0;
    double energy = 0.0;
    double mass = 0.0;
    /// |Richardson-extrapolated - fine Simpson| for the quotient.
    double error_estimate = 0.0;
};

namespace detail {

inline double euclidean_energy_integrand(double t, int n) {
    const double k = 0.5 * (n - 4);
    if (t >= 1.0) {
        // (Δs)² r^{n-1} dr/dt -> 16 k² 4^k (1-t)^{n-5}
        return n == 5 ? 16.0 * k * k * std::pow(4.0, k) : 0.0;
    }
    const double r = t / (1.0 - t);
    const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
    const double one = 1.0 + r * r;
    const double base = 2.0 / one;
    // s' and s'' of s = (2/(1+r²))^k, combined as s'' + (n-1) s'/r.
    const double s = std::pow(base, k);
    const double ds_over_r = -2.0 * k * s / one;
    const double d2s = -2.0 * k * s / one + 4.0 * k * (k + 1.0) * s * r * r / (one * one);
    const double lap = d2s + (n - 1) * ds_over_r;
    return lap * lap * std::pow(r, n - 1) * jac;
}

inline double euclidean_mass_integrand(double t, int n) {
    if (t >= 1.0) {
        return 0.0;
    }
    const double r = t / (1.0 - t);
    const double jac = 1.0 / ((1.0 - t) * (1.0 - t));
    return std::pow(2.0 / (1.0 + r * r), n) * std::pow(r, n - 1) * jac;
}

template <class F>
double simpson_unit(std::size_t intervals, const F& f) {
    const double h = 1.0 / static_cast<double>(intervals);
    return quadrature::simpson(intervals + 1, h, [&](std::size_t i) { return f(static_cast<double>(i) * h); });
}

} // namespace detail

inline EuclideanBubble euclidean_bubble_quotient(Dimension dim, std::size_t intervals = 1 << 14) {
    const int n = dim.value();
    const double area = sphere_area(n - 1);
    const double q = to_double(exponents(dim).quotient_power);
    auto energy = [&](std::size_t m) {
        return area * detail::simpson_unit(m, [&](double t) { return detail::euclidean_energy_integrand(t, n); });
    };
    auto mass = [&](std::size_t m) {
        return area * detail::simpson_unit(m, [&](double t) { return detail::euclidean_mass_integrand(t, n); });
    };
    const double e_coarse = energy(intervals);
    const double e_fine = energy(2 * intervals);
    const double m_coarse = mass(intervals);
    const double m_fine = mass(2 * intervals);
    EuclideanBubble b;
    b.energy = (16.0 * e_fine - e_coarse) / 15.0;
    b.mass = (16.0 * m_fine - m_coarse) / 15.0;
    b.quotient = b.energy / std::pow(b.mass, q);
    b.error_estimate = std::abs(b.quotient - e_fine / std::pow(m_fine, q));
    return b;
}

/// Q(S^n) vol(S^n)^{4/n}: the quotient of the constant function on the round
/// sphere.
inline double sphere_constant_intrinsic(Dimension n) {
    const CurvatureData c = curvature(RoundSphere{n});
    return c.Q * std::pow(volume(RoundSphere{n}), 4.0 / n.value());
}

struct BubbleReport {
    double epsilon = 0.0;
    QuotientReport quotient;
    double oracle = 0.0;
    double rel_err = 0.0;
    /// Energy carried by the annulus ε <= r <= 2ε.
    double transition_energy = 0.0;
};

/// ℘(u_ε) for a bubble centred at a point of a flat torus. The support stays
/// inside one fundamental cell, where P = Δ², so energy and mass reduce to
/// radial integrals.
inline BubbleReport bubble_quotient(const BubbleParams& p, const FlatTorus& host, double oracle) {
    validate(p);
    validate_model(host);
    if (host.n != p.n) {
        throw LayoutMismatch("bubble and host have different dimensions");
    }
    double min_side = host.side_lengths.front();
    for (double s : host.side_lengths) {
        min_side = std::min(min_side, s);
    }
    if (!(2.0 * p.epsilon < 0.25 * min_side)) {
        throw RangeError("bubble support 2*epsilon must stay below min side / 4");
    }
    const ScalarField u = bubble(p);
    const ScalarField lap = laplacian(u);
    BubbleReport r;
    r.epsilon = p.epsilon;
    r.quotient.numerator = inner(lap, lap);
    r.quotient.mass = lp_mass(u, exponents(p.n).critical_exponent);
    r.quotient.quotient = r.quotient.numerator / std::pow(r.quotient.mass, to_double(exponents(p.n).quotient_power));
    r.quotient.model = describe(MetricModel{host});
    r.quotient.grid = describe(u);
    r.oracle = oracle;
    r.rel_err = std::abs(r.quotient.quotient - oracle) / std::abs(oracle);
    const double h = u.spacing();
    const ScalarField annulus = u.with_values([&] {
        std::vector<double> v(u.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = static_cast<double>(i) * h >= p.epsilon ? lap[i] * lap[i] : 0.0;
        }
        return v;
    }());
    r.transition_energy = integrate(annulus);
    return r;
}

inline BubbleReport bubble_quotient(const BubbleParams& p, const FlatTorus& host) {
    return bubble_quotient(p, host, euclidean_bubble_quotient(p.n).quotient);
}

} // namespace paneitz
