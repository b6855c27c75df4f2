#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "paneitz/constructions/smoothstep.hpp"
#include "paneitz/fields.hpp"
#include "paneitz/geometry.hpp"
#include "paneitz/measure.hpp"
#include "paneitz/paneitz.hpp"

namespace paneitz {

struct CutoffParams {
    double delta;
    /// Centre in torus coordinates; empty means the origin.
    std::vector<double> center;
};

/// Measured constants of |∇f_δ| <= C/δ and |Δf_δ| <= C/δ².
struct CutoffConstants {
    double gradient = 0.0;  // sup |∇f_δ| δ
    double laplacian = 0.0; // sup |Δf_δ| δ²
    double C0 = 0.0;        // max of the two
};

struct CutoffField {
    ScalarField field;
    CutoffConstants measured;
};

/// f_δ as a function of the distance to the centre: 0 on [0, δ], quintic
/// smoothstep on [δ, 2δ], 1 beyond.
inline double cutoff_profile(double r, double delta) {
    return smoothstep5((r - delta) / delta);
}

/// Distance on the torus between x and c (minimum image).
inline double torus_distance(std::span<const double> x, std::span<const double> c, std::span<const double> sides) {
    double acc = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        double dx = std::fmod(x[d] - c[d], sides[d]);
        if (dx < -0.5 * sides[d]) {
            dx += sides[d];
        } else if (dx >= 0.5 * sides[d]) {
            dx -= sides[d];
        }
        acc += dx * dx;
    }
    return std::sqrt(acc);
}

/// Sup-norms of the discrete radial gradient and Laplacian of f_δ, sampled on
/// [0, 3δ] at a resolution proportional to δ.
inline CutoffConstants measure_cutoff_constants(Dimension n, double delta, std::size_t samples = 6001) {
    const ScalarField f =
        ScalarField::radial(n, 3.0 * delta, samples, [delta](double r) { return cutoff_profile(r, delta); });
    CutoffConstants c;
    c.gradient = profile_derivative(f).max_abs() * delta;
    c.laplacian = laplacian(f).max_abs() * delta * delta;
    c.C0 = std::max(c.gradient, c.laplacian);
    return c;
}

inline std::vector<double> resolve_center(const CutoffParams& p, Dimension n) {
    if (p.center.empty()) {
        return std::vector<double>(n.value(), 0.0);
    }
    if (static_cast<int>(p.center.size()) != n.value()) {
        throw PreconditionError("cutoff centre needs one coordinate per dimension");
    }
    return p.center;
}

inline CutoffField cutoff_family(const CutoffParams& p, const GridSpec& grid) {
    if (!(p.delta > 0.0)) {
        throw RangeError("cutoff delta must be positive");
    }
    if (!(2.0 * p.delta < 0.25 * grid.min_side())) {
        throw RangeError("cutoff radius 2*delta must stay below min side / 4");
    }
    const std::vector<double> c = resolve_center(p, grid.dimension());
    const std::vector<double>& sides = grid.side_lengths();
    ScalarField f = ScalarField::on_grid(grid, [&](std::span<const double> x) {
        return cutoff_profile(torus_distance(x, c, sides), p.delta);
    });
    return {std::move(f), measure_cutoff_constants(grid.dimension(), p.delta)};
}

// ---------------------------------------------------------------------------
// Cutoff sweep

namespace detail {

/// Degree-5 cubature on S^{n-1} with normalised weights: the 2n points ±e_i
/// and the 2n(n-1) points (±e_i ± e_j)/√2. Exact for polynomials of degree
/// <= 5 restricted to the sphere.
struct SphereCubature {
    std::vector<std::vector<double>> points;
    std::vector<double> weights;
};

inline SphereCubature sphere_cubature5(int n) {
    SphereCubature c;
    const double axis_weight = (4.0 - n) / (2.0 * n * (n + 2.0));
    const double pair_weight = 1.0 / (n * (n + 2.0));
    for (int i = 0; i < n; ++i) {
        for (double s : {1.0, -1.0}) {
            std::vector<double> x(n, 0.0);
            x[i] = s;
            c.points.push_back(std::move(x));
            c.weights.push_back(axis_weight);
        }
    }
    const double a = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (double si : {1.0, -1.0}) {
                for (double sj : {1.0, -1.0}) {
                    std::vector<double> x(n, 0.0);
                    x[i] = si * a;
                    x[j] = sj * a;
                    c.points.push_back(std::move(x));
                    c.weights.push_back(pair_weight);
                }
            }
        }
    }
    return c;
}

/// Second-order Taylor model u0 + g·x + ½ xᵀHx of a grid field at a node,
/// derivatives from fourth-order central differences.
struct TaylorModel {
    double value = 0.0;
    std::vector<double> gradient;
    std::vector<std::vector<double>> hessian;

    double eval(std::span<const double> x) const {
        double v = value;
        for (std::size_t a = 0; a < x.size(); ++a) {
            v += gradient[a] * x[a];
            for (std::size_t b = 0; b < x.size(); ++b) {
                v += 0.5 * hessian[a][b] * x[a] * x[b];
            }
        }
        return v;
    }

    double directional_gradient(std::span<const double> x, std::span<const double> theta) const {
        double v = 0.0;
        for (std::size_t a = 0; a < x.size(); ++a) {
            double ga = gradient[a];
            for (std::size_t b = 0; b < x.size(); ++b) {
                ga += hessian[a][b] * x[b];
            }
            v += theta[a] * ga;
        }
        return v;
    }

    double laplacian() const {
        double t = 0.0;
        for (std::size_t a = 0; a < gradient.size(); ++a) {
            t += hessian[a][a];
        }
        return t;
    }
};

inline std::size_t step(const GridSpec& g, std::size_t idx, int axis, int offset) {
    for (int k = 0; k < std::abs(offset); ++k) {
        idx = g.neighbor(idx, axis, offset > 0 ? 1 : -1);
    }
    return idx;
}

inline TaylorModel taylor_at_node(const ScalarField& u, std::size_t node) {
    const GridSpec& g = u.grid();
    const int n = g.dimension().value();
    auto d1 = [&](std::size_t idx, int a) {
        const double h = g.spacing(a);
        return (-u[step(g, idx, a, 2)] + 8.0 * u[step(g, idx, a, 1)] - 8.0 * u[step(g, idx, a, -1)] +
                u[step(g, idx, a, -2)]) /
               (12.0 * h);
    };
    TaylorModel t;
    t.value = u[node];
    t.gradient.resize(n);
    t.hessian.assign(n, std::vector<double>(n, 0.0));
    for (int a = 0; a < n; ++a) {
        t.gradient[a] = d1(node, a);
        const double h = g.spacing(a);
        t.hessian[a][a] = (-u[step(g, node, a, 2)] + 16.0 * u[step(g, node, a, 1)] - 30.0 * u[node] +
                           16.0 * u[step(g, node, a, -1)] - u[step(g, node, a, -2)]) /
                          (12.0 * h * h);
    }
    for (int a = 0; a < n; ++a) {
        const double h = g.spacing(a);
        for (int b = a + 1; b < n; ++b) {
            const double v = (-d1(step(g, node, a, 2), b) + 8.0 * d1(step(g, node, a, 1), b) -
                              8.0 * d1(step(g, node, a, -1), b) + d1(step(g, node, a, -2), b)) /
                             (12.0 * h);
            t.hessian[a][b] = v;
            t.hessian[b][a] = v;
        }
    }
    return t;
}

/// Changes of energy and critical mass when u is replaced by f_δ u. Both
/// integrands differ from zero only on B_{2δ}, where u is replaced by its
/// Taylor model and f_δ is differentiated analytically.
struct BallCorrection {
    double energy = 0.0;
    double mass = 0.0;
};

inline BallCorrection cutoff_ball_correction(const TaylorModel& t, int n, double delta, double p) {
    using Gauss = boost::math::quadrature::gauss<double, 30>;
    const SphereCubature cub = sphere_cubature5(n);
    const double area = sphere_area(n - 1);
    const double lap_u = t.laplacian();
    std::vector<double> x(n);

    auto shell = [&](double r, bool want_energy) {
        const double s = (r - delta) / delta;
        const double f = smoothstep5(s);
        const double f1 = smoothstep5_d1(s) / delta;
        const double f2 = smoothstep5_d2(s) / (delta * delta);
        const double lap_f = f2 + (n - 1) * f1 / r;
        double acc = 0.0;
        for (std::size_t k = 0; k < cub.points.size(); ++k) {
            const std::vector<double>& theta = cub.points[k];
            for (int a = 0; a < n; ++a) {
                x[a] = r * theta[a];
            }
            const double u = t.eval(x);
            double term;
            if (want_energy) {
                const double lap_fu = f * lap_u + 2.0 * f1 * t.directional_gradient(x, theta) + u * lap_f;
                term = lap_fu * lap_fu - lap_u * lap_u;
            } else {
                term = std::pow(f * u, p) - std::pow(u, p);
            }
            acc += cub.weights[k] * term;
        }
        return area * acc * std::pow(r, n - 1);
    };

    BallCorrection c;
    // Inside B_δ the product vanishes; -(Δu)² integrates exactly.
    c.energy = -lap_u * lap_u * unit_ball_volume(n) * std::pow(delta, n) +
               Gauss::integrate([&](double r) { return shell(r, true); }, delta, 2.0 * delta);
    c.mass = Gauss::integrate([&](double r) { return shell(r, false); }, 0.0, delta) +
             Gauss::integrate([&](double r) { return shell(r, false); }, delta, 2.0 * delta);
    return c;
}

inline std::size_t nearest_node(const GridSpec& g, std::span<const double> c) {
    std::size_t idx = 0;
    const auto p = static_cast<std::size_t>(g.points_per_axis());
    for (int d = 0; d < g.dimension().value(); ++d) {
        double cell = std::round(c[d] / g.spacing(d));
        auto k = static_cast<long long>(cell) % static_cast<long long>(p);
        if (k < 0) {
            k += static_cast<long long>(p);
        }
        idx = idx * p + static_cast<std::size_t>(k);
    }
    return idx;
}

} // namespace detail

struct CutoffSweepRow {
    double delta = 0.0;
    double quotient = 0.0;
    double delta_quotient = 0.0;
    double energy_change = 0.0;
    double mass_change = 0.0;
    CutoffConstants constants;
};

struct CutoffSweepReport {
    double base_quotient = 0.0;
    std::vector<CutoffSweepRow> rows;
    /// Least-squares slope of log|℘(f_δ u) - ℘(u)| against log δ.
    std::optional<double> fitted_order;
};

/// Least-squares slope of log|y| against log x; empty with fewer than two
/// usable points.
inline std::optional<double> fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0.0 && y[i] != 0.0 && std::isfinite(y[i])) {
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(std::abs(y[i])));
        }
    }
    if (lx.size() < 2) {
        return std::nullopt;
    }
    const double m = static_cast<double>(lx.size());
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    const double mx = sx / m;
    const double my = sy / m;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) {
        return std::nullopt;
    }
    return sxy / sxx;
}

/// ℘(f_δ u) - ℘(u) over a list of δ on a flat torus. The centre is snapped to
/// the nearest grid node. ℘(u) uses the grid energy; the cutoff changes the
/// integrands only on B_{2δ}, and that change is integrated in the continuum
/// so that δ well below the grid spacing is still resolved.
inline CutoffSweepReport cutoff_sweep(const FlatTorus& model, const ScalarField& u, const std::vector<double>& deltas,
                                      const std::vector<double>& center = {}) {
    if (!(u.min() > 0.0)) {
        throw DomainError("cutoff sweep expects a positive field");
    }
    const QuotientReport base = functional(MetricModel{model}, u);
    const GridSpec& g = u.grid();
    const Dimension n = g.dimension();
    const double p = to_double(exponents(n).critical_exponent);
    const double q = to_double(exponents(n).quotient_power);
    const std::vector<double> c = resolve_center(CutoffParams{0.0, center}, n);
    const detail::TaylorModel taylor = detail::taylor_at_node(u, detail::nearest_node(g, c));

    CutoffSweepReport report;
    report.base_quotient = base.quotient;
    std::vector<double> xs;
    std::vector<double> ys;
    for (double delta : deltas) {
        if (!(delta > 0.0) || !(2.0 * delta < 0.25 * g.min_side())) {
            throw RangeError("cutoff delta out of range for this torus");
        }
        const detail::BallCorrection corr = detail::cutoff_ball_correction(taylor, n.value(), delta, p);
        CutoffSweepRow row;
        row.delta = delta;
        row.energy_change = corr.energy;
        row.mass_change = corr.mass;
        row.quotient = (base.numerator + corr.energy) / std::pow(base.mass + corr.mass, q);
        row.delta_quotient = row.quotient - base.quotient;
        row.constants = measure_cutoff_constants(n, delta);
        report.rows.push_back(row);
        xs.push_back(delta);
        ys.push_back(row.delta_quotient);
    }
    report.fitted_order = fit_log_slope(xs, ys);
    return report;
}

} // namespace paneitz
