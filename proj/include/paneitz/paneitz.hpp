#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "paneitz/core.hpp"
#include "paneitz/fields.hpp"
#include "paneitz/geometry.hpp"

namespace paneitz {

/// Numerator, mass and value of the Paneitz quotient
/// ℘(u) = ∫ u P u dv / (∫ u^{2n/(n-4)} dv)^{(n-4)/n}.
struct QuotientReport {
    double numerator = 0.0;
    double mass = 0.0;
    double quotient = 0.0;
    std::string model;
    std::string grid;
};

struct LowerBoundConstants {
    double C1 = 0.0;
    double C2 = 0.0;
    double volume = 0.0;
    double bound = 0.0;
};

struct CovarianceReport {
    double residual = 0.0;
    double scale = 0.0;
    double relative = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct LowerBoundReport {
    LowerBoundConstants constants;
    std::vector<double> quotients;
    double margin = 0.0;
    int failures = 0;
    bool passed = false;
};

inline std::string describe(const MetricModel& m) {
    std::ostringstream os;
    os.precision(17);
    os << model_name(m) << "(n=" << model_dimension(m).value();
    std::visit(
        [&](const auto& v) {
            using M = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<M, RoundSphere>) {
                os << ", radius=" << v.radius;
            } else if constexpr (std::is_same_v<M, Cylinder>) {
                os << ", length=" << v.length;
            } else {
                os << ", sides=[";
                for (std::size_t i = 0; i < v.side_lengths.size(); ++i) {
                    os << (i ? "," : "") << v.side_lengths[i];
                }
                os << "]";
            }
        },
        m);
    os << ")";
    return os.str();
}

inline std::string describe(const ScalarField& f) {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& l) {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, PeriodicGrid>) {
                os << "periodic grid " << l.spec.points_per_axis() << "^" << l.spec.dimension().value();
            } else if constexpr (std::is_same_v<L, RadialProfile>) {
                os << "radial profile, " << f.size() << " samples, r_max=" << l.r_max;
            } else {
                os << "axial profile, " << f.size() << " samples, length=" << l.length;
            }
        },
        f.layout());
    return os.str();
}

namespace detail {

inline bool close(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

inline bool is_constant(const ScalarField& u) {
    return u.min() == u.max();
}

inline void require_torus_grid(const std::vector<double>& sides, Dimension n, const ScalarField& u) {
    const GridSpec& g = u.grid();
    if (g.dimension() != n) {
        throw LayoutMismatch("grid dimension differs from the model dimension");
    }
    for (int d = 0; d < n.value(); ++d) {
        if (!close(g.side_lengths()[d], sides[d])) {
            throw LayoutMismatch("grid side lengths differ from the torus side lengths");
        }
    }
}

inline const AxialProfile& require_cylinder_profile(const Cylinder& c, const ScalarField& u) {
    const auto* a = std::get_if<AxialProfile>(&u.layout());
    if (a == nullptr) {
        throw LayoutMismatch("cylinder fields must be axial t-profiles");
    }
    if (a->n != c.n || !close(a->length, c.length)) {
        throw LayoutMismatch("axial profile does not match the cylinder");
    }
    return *a;
}

/// Eigenvalues of a_n R g - ricci_coeff Ric along the axial/flat and the
/// spherical directions.
struct GradientTensor {
    double axial;
    double tangent;
};

inline GradientTensor gradient_tensor(const CurvatureData& c, Dimension n) {
    const PaneitzCoefficients k = coefficients(n);
    const double anR = to_double(k.a_n) * c.R;
    return {anR - to_double(k.ricci_coeff) * c.ricci_normal, anR - to_double(k.ricci_coeff) * c.ricci_tangent};
}

/// Pointwise Paneitz energy density of a t-profile on the cylinder,
/// (u'')² + A_axial (u')² + Q u². The slice directions carry no gradient.
inline ScalarField cylinder_density(const Cylinder& c, const ScalarField& u) {
    require_cylinder_profile(c, u);
    const CurvatureData curv = curvature(c);
    const GradientTensor a = gradient_tensor(curv, c.n);
    const ScalarField lap = laplacian(u);
    const CylinderGradient grad = gradient_split_cylinder(u);
    std::vector<double> d(u.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = lap[i] * lap[i] + a.axial * grad.axial_sq[i] + a.tangent * grad.spherical_sq[i] +
               curv.Q * u[i] * u[i];
    }
    return u.with_values(std::move(d));
}

} // namespace detail

/// P[g]u = Δ²u - div(A ∇u) + Q u with A = a_n R g - ricci_coeff Ric.
/// Flat tori give exactly the bilaplacian; on the cylinder A acts on the
/// t-derivative through its axial eigenvalue.
inline ScalarField apply_operator(const MetricModel& model, const ScalarField& u) {
    validate_model(model);
    if (const auto* t = std::get_if<FlatTorus>(&model)) {
        detail::require_torus_grid(t->side_lengths, t->n, u);
        return bilaplacian(u);
    }
    if (const auto* c = std::get_if<Cylinder>(&model)) {
        detail::require_cylinder_profile(*c, u);
        const CurvatureData curv = curvature(model);
        const detail::GradientTensor a = detail::gradient_tensor(curv, c->n);
        const ScalarField lap = laplacian(u);
        const ScalarField lap2 = laplacian(lap);
        std::vector<double> out(u.size());
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = lap2[i] - a.axial * lap[i] + curv.Q * u[i];
        }
        return u.with_values(std::move(out));
    }
    if (std::holds_alternative<RoundSphere>(model)) {
        throw UnsupportedVariant("the operator on the round sphere has no field layout; use the sphere constants");
    }
    throw UnsupportedVariant("conformal-to-flat operator: use covariance_check");
}

/// ∫ (Δu)² + a_n R |∇u|² - ricci_coeff Ric(∇u,∇u) + Q u² dv.
///
/// On a conformal-to-flat model g_w the energy is evaluated through the
/// covariance identity as ∫ (Δ(w u))² dx on the flat background.
inline double energy(const MetricModel& model, const ScalarField& u) {
    validate_model(model);
    if (const auto* t = std::get_if<FlatTorus>(&model)) {
        detail::require_torus_grid(t->side_lengths, t->n, u);
        const ScalarField lap = laplacian(u);
        return inner(lap, lap);
    }
    if (const auto* c = std::get_if<Cylinder>(&model)) {
        return integrate(detail::cylinder_density(*c, u));
    }
    if (std::holds_alternative<RoundSphere>(model)) {
        if (!detail::is_constant(u)) {
            throw UnsupportedVariant("only constant fields are supported on the round sphere");
        }
        const double c = u[0];
        return curvature(model).Q * c * c * volume(model);
    }
    const auto& cf = std::get<ConformalToFlat>(model);
    detail::require_torus_grid(cf.side_lengths, cf.n, u);
    const ScalarField lap = laplacian(cf.factor * u);
    return inner(lap, lap);
}

/// ∫ u^{2n/(n-4)} dv in the model's volume form.
inline double critical_mass(const MetricModel& model, const ScalarField& u) {
    const Dimension n = model_dimension(model);
    const Rational p = exponents(n).critical_exponent;
    if (std::holds_alternative<RoundSphere>(model)) {
        if (!detail::is_constant(u)) {
            throw UnsupportedVariant("only constant fields are supported on the round sphere");
        }
        return std::pow(u[0], to_double(p)) * volume(model);
    }
    if (const auto* cf = std::get_if<ConformalToFlat>(&model)) {
        detail::require_torus_grid(cf->side_lengths, cf->n, u);
        return lp_mass(cf->factor * u, p);
    }
    return lp_mass(u, p);
}

inline QuotientReport functional(const MetricModel& model, const ScalarField& u) {
    if (u.min() < 0.0) {
        throw DomainError("the Paneitz functional takes nonnegative functions");
    }
    const Dimension n = model_dimension(model);
    QuotientReport r;
    r.numerator = energy(model, u);
    r.mass = critical_mass(model, u);
    if (!(r.mass > 0.0)) {
        throw DegenerateInput("test function has zero mass");
    }
    r.quotient = r.numerator / std::pow(r.mass, to_double(exponents(n).quotient_power));
    if (!std::isfinite(r.quotient)) {
        throw DegenerateInput("quotient is not finite");
    }
    r.model = describe(model);
    r.grid = describe(u);
    return r;
}

/// Product-rule expansion of Δ²(w u):
///   w Δ²u + u Δ²w + 4 ∇w·∇Δu + 4 ∇u·∇Δw + 2 Δw Δu + 4 ∇²w : ∇²u,
/// each term with its own centered stencil.
inline ScalarField bilaplacian_of_product(const ScalarField& w, const ScalarField& u) {
    detail::require_same_layout(w, u);
    const int n = w.grid().dimension().value();
    const ScalarField lap_w = laplacian(w);
    const ScalarField lap_u = laplacian(u);
    const ScalarField lap2_w = laplacian(lap_w);
    const ScalarField lap2_u = laplacian(lap_u);

    std::vector<double> acc(w.size());
    for (std::size_t i = 0; i < acc.size(); ++i) {
        acc[i] = w[i] * lap2_u[i] + u[i] * lap2_w[i] + 2.0 * lap_w[i] * lap_u[i];
    }
    std::vector<ScalarField> dw;
    std::vector<ScalarField> du;
    for (int a = 0; a < n; ++a) {
        dw.push_back(first_difference(w, a));
        du.push_back(first_difference(u, a));
        const ScalarField grad_lap_u = first_difference(lap_u, a);
        const ScalarField grad_lap_w = first_difference(lap_w, a);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += 4.0 * (dw[a][i] * grad_lap_u[i] + du[a][i] * grad_lap_w[i]);
        }
    }
    for (int a = 0; a < n; ++a) {
        const ScalarField hw = second_difference(w, a);
        const ScalarField hu = second_difference(u, a);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += 4.0 * hw[i] * hu[i];
        }
        for (int b = a + 1; b < n; ++b) {
            const ScalarField hwab = first_difference(dw[b], a);
            const ScalarField huab = first_difference(du[b], a);
            for (std::size_t i = 0; i < acc.size(); ++i) {
                acc[i] += 8.0 * hwab[i] * huab[i];
            }
        }
    }
    return w.with_values(std::move(acc));
}

/// Compares P[g_w]u computed as w^{-(n+4)/(n-4)} Δ²(w u) against the same
/// quantity assembled from the product-rule expansion. The two routes agree
/// exactly in the continuum; the residual is reported relative to the larger
/// sup-norm of the two.
inline CovarianceReport covariance_check(const ScalarField& w, const ScalarField& u, double tol) {
    detail::require_same_layout(w, u);
    if (!(w.min() > 0.0)) {
        throw DomainError("conformal factor must be strictly positive");
    }
    const Dimension n = w.grid().dimension();
    const double power = -to_double(exponents(n).equation_power);
    const ScalarField direct = bilaplacian(w * u);
    const ScalarField expanded = bilaplacian_of_product(w, u);
    CovarianceReport r;
    r.tolerance = tol;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double scale = std::pow(w[i], power);
        const double a = scale * direct[i];
        const double b = scale * expanded[i];
        r.residual = std::max(r.residual, std::abs(a - b));
        r.scale = std::max({r.scale, std::abs(a), std::abs(b)});
    }
    r.relative = r.scale > 0.0 ? r.residual / r.scale : r.residual;
    r.passed = r.relative <= tol;
    return r;
}

/// Constants of the coercivity estimate
///   ∫ u P u ≥ ½ ∫ (Δu)² - (½ C1² + C2) ∫ u²  ≥ -(½ C1² + C2) vol^{4/n}
/// for unit critical mass. C1 bounds the smallest eigenvalue of
/// a_n R g - ricci_coeff Ric from below in absolute value, C2 = sup |Q|.
inline LowerBoundConstants lower_bound_constants(const MetricModel& model) {
    const CurvatureData c = curvature(model);
    const Dimension n = model_dimension(model);
    const detail::GradientTensor a = detail::gradient_tensor(c, n);
    LowerBoundConstants k;
    k.C1 = std::abs(std::min(a.axial, a.tangent));
    k.C2 = std::abs(c.Q);
    k.volume = volume(model);
    k.bound = -(0.5 * k.C1 * k.C1 + k.C2) * std::pow(k.volume, 4.0 / n.value());
    return k;
}

/// Evaluates ℘ on each sample after rescaling it to unit critical mass and
/// checks ℘ ≥ bound. A violation is reported, never thrown.
inline LowerBoundReport verify_lower_bound(const MetricModel& model, const std::vector<ScalarField>& samples) {
    LowerBoundReport r;
    r.constants = lower_bound_constants(model);
    r.margin = std::numeric_limits<double>::infinity();
    const double p = to_double(exponents(model_dimension(model)).critical_exponent);
    for (const ScalarField& s : samples) {
        const double m = critical_mass(model, s);
        const ScalarField unit = std::pow(m, -1.0 / p) * s;
        const double q = functional(model, unit).quotient;
        r.quotients.push_back(q);
        r.margin = std::min(r.margin, q - r.constants.bound);
        if (!(q >= r.constants.bound)) {
            ++r.failures;
        }
    }
    r.passed = r.failures == 0;
    return r;
}

struct DescentOptions {
    int max_iterations = 50;
    double initial_step = 1e-2;
    double min_step = 1e-12;
    double floor = 1e-10;
};

struct DescentResult {
    ScalarField u;
    std::vector<double> history;
};

/// Heuristic upper-bound improver: projected gradient descent on ℘ over
/// positive fields, halving the step whenever the quotient would increase.
/// The result bounds λ(M,[g]) from above; it is not a minimizer.
inline DescentResult refine_upper_bound(const MetricModel& model, const ScalarField& start,
                                        const DescentOptions& opt = {}) {
    const Dimension n = model_dimension(model);
    const double p = to_double(exponents(n).critical_exponent);
    const double q = to_double(exponents(n).quotient_power);
    ScalarField u = start;
    double current = functional(model, u).quotient;
    DescentResult out{u, {current}};
    double step = opt.initial_step;
    for (int it = 0; it < opt.max_iterations && step >= opt.min_step; ++it) {
        const ScalarField pu = apply_operator(model, u);
        const double e = energy(model, u);
        const double m = critical_mass(model, u);
        const double scale = std::pow(m, -q);
        std::vector<double> grad(u.size());
        for (std::size_t i = 0; i < grad.size(); ++i) {
            grad[i] = scale * (2.0 * pu[i] - q * e / m * p * std::pow(u[i], p - 1.0));
        }
        double gmax = 0.0;
        for (double g : grad) {
            gmax = std::max(gmax, std::abs(g));
        }
        if (gmax == 0.0) {
            break;
        }
        while (step >= opt.min_step) {
            std::vector<double> trial(u.size());
            for (std::size_t i = 0; i < trial.size(); ++i) {
                trial[i] = std::max(opt.floor, u[i] - step * grad[i] / gmax);
            }
            ScalarField candidate = u.with_values(std::move(trial));
            const double value = functional(model, candidate).quotient;
            if (value < current) {
                u = std::move(candidate);
                current = value;
                out.history.push_back(current);
                step *= 1.5;
                break;
            }
            step *= 0.5;
        }
    }
    out.u = std::move(u);
    return out;
}

} // namespace paneitz
