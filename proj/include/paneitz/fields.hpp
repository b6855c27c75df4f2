#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "paneitz/core.hpp"
#include "paneitz/measure.hpp"
#include "paneitz/parallel.hpp"
#include "paneitz/quadrature.hpp"

namespace paneitz {

inline constexpr std::size_t default_point_budget = 2'000'000;

/// Uniform periodic grid on a flat n-torus. Values are stored row-major with
/// axis 0 slowest; node i_d sits at coordinate i_d * spacing(d).
class GridSpec {
public:
    GridSpec(Dimension n, int points_per_axis, std::vector<double> side_lengths,
             std::size_t budget = default_point_budget)
        : n_(n), points_(points_per_axis), sides_(std::move(side_lengths)) {
        if (points_ < 8) {
            throw PreconditionError("points_per_axis must be >= 8");
        }
        if (static_cast<int>(sides_.size()) != n_.value()) {
            throw PreconditionError("expected " + std::to_string(n_.value()) + " side lengths, got " +
                                    std::to_string(sides_.size()));
        }
        for (double s : sides_) {
            if (!(s > 0.0) || !std::isfinite(s)) {
                throw PreconditionError("side lengths must be positive and finite");
            }
        }
        total_ = 1;
        for (int d = 0; d < n_.value(); ++d) {
            if (total_ > budget / static_cast<std::size_t>(points_)) {
                throw BudgetExceeded("grid " + std::to_string(points_) + "^" + std::to_string(n_.value()) +
                                     " exceeds the point budget of " + std::to_string(budget));
            }
            total_ *= static_cast<std::size_t>(points_);
        }
        if (total_ > budget) {
            throw BudgetExceeded("grid exceeds the point budget of " + std::to_string(budget));
        }
    }

    /// Cube [0, side]^n.
    static GridSpec cube(Dimension n, int points_per_axis, double side,
                         std::size_t budget = default_point_budget) {
        return GridSpec(n, points_per_axis, std::vector<double>(n.value(), side), budget);
    }

    Dimension dimension() const noexcept { return n_; }
    int points_per_axis() const noexcept { return points_; }
    const std::vector<double>& side_lengths() const noexcept { return sides_; }
    std::size_t total_points() const noexcept { return total_; }
    double spacing(int axis) const { return sides_.at(axis) / points_; }
    double min_side() const { return *std::min_element(sides_.begin(), sides_.end()); }

    std::size_t stride(int axis) const {
        std::size_t s = 1;
        for (int d = axis + 1; d < n_.value(); ++d) {
            s *= static_cast<std::size_t>(points_);
        }
        return s;
    }

    double cell_volume() const {
        double v = 1.0;
        for (int d = 0; d < n_.value(); ++d) {
            v *= spacing(d);
        }
        return v;
    }

    double volume() const {
        double v = 1.0;
        for (double s : sides_) {
            v *= s;
        }
        return v;
    }

    /// Index of the neighbour one step along `axis` (dir = +1 or -1), wrapping.
    std::size_t neighbor(std::size_t index, int axis, int dir) const {
        const std::size_t s = stride(axis);
        const std::size_t p = static_cast<std::size_t>(points_);
        const std::size_t c = (index / s) % p;
        if (dir > 0) {
            return c + 1 == p ? index - (p - 1) * s : index + s;
        }
        return c == 0 ? index + (p - 1) * s : index - s;
    }

    void coordinates(std::size_t index, std::span<double> x) const {
        for (int d = n_.value() - 1; d >= 0; --d) {
            const std::size_t c = index % static_cast<std::size_t>(points_);
            index /= static_cast<std::size_t>(points_);
            x[d] = static_cast<double>(c) * spacing(d);
        }
    }

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.n_ == b.n_ && a.points_ == b.points_ && a.sides_ == b.sides_;
    }

private:
    Dimension n_;
    int points_;
    std::vector<double> sides_;
    std::size_t total_ = 0;
};

struct PeriodicGrid {
    GridSpec spec;
    friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;
};

/// Radially symmetric function on the n-ball of radius r_max, sampled at
/// r_i = i r_max / (samples - 1). With even_extension the profile is
/// continued by f(-r) = f(r) through the origin.
struct RadialProfile {
    Dimension n;
    double r_max;
    bool even_extension = true;
    friend bool operator==(const RadialProfile&, const RadialProfile&) = default;
};

/// Function of the axial coordinate t of the cylinder [0, length] x S^{n-1},
/// sampled at t_i = i length / (samples - 1) with clamped (one-sided) ends.
struct AxialProfile {
    Dimension n;
    double length;
    bool axisymmetric = true;
    friend bool operator==(const AxialProfile&, const AxialProfile&) = default;
};

using Layout = std::variant<PeriodicGrid, RadialProfile, AxialProfile>;

inline constexpr std::size_t min_radial_samples = 64;
inline constexpr std::size_t min_axial_samples = 5;

class ScalarField {
public:
    ScalarField(Layout layout, std::vector<double> values)
        : layout_(std::move(layout)), values_(std::move(values)) {
        validate();
    }

    template <class F>
    static ScalarField on_grid(const GridSpec& spec, F&& f) {
        std::vector<double> v(spec.total_points());
        const int n = spec.dimension().value();
        parallel_for(v.size(), [&](std::size_t i) {
            double x[64];
            spec.coordinates(i, std::span<double>(x, static_cast<std::size_t>(n)));
            v[i] = f(std::span<const double>(x, static_cast<std::size_t>(n)));
        });
        return ScalarField(PeriodicGrid{spec}, std::move(v));
    }

    template <class F>
    static ScalarField radial(Dimension n, double r_max, std::size_t samples, F&& f) {
        std::vector<double> v(samples);
        const double h = r_max / static_cast<double>(samples - 1);
        for (std::size_t i = 0; i < samples; ++i) {
            v[i] = f(static_cast<double>(i) * h);
        }
        return ScalarField(RadialProfile{n, r_max}, std::move(v));
    }

    template <class F>
    static ScalarField axial(Dimension n, double length, std::size_t samples, F&& f) {
        std::vector<double> v(samples);
        const double h = length / static_cast<double>(samples - 1);
        for (std::size_t i = 0; i < samples; ++i) {
            v[i] = f(static_cast<double>(i) * h);
        }
        return ScalarField(AxialProfile{n, length}, std::move(v));
    }

    const Layout& layout() const noexcept { return layout_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }

    bool is_grid() const noexcept { return std::holds_alternative<PeriodicGrid>(layout_); }
    bool is_radial() const noexcept { return std::holds_alternative<RadialProfile>(layout_); }
    bool is_axial() const noexcept { return std::holds_alternative<AxialProfile>(layout_); }

    const GridSpec& grid() const {
        if (!is_grid()) {
            throw LayoutMismatch("field is not on a periodic grid");
        }
        return std::get<PeriodicGrid>(layout_).spec;
    }

    Dimension dimension() const {
        return std::visit(
            [](const auto& l) -> Dimension {
                using L = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<L, PeriodicGrid>) {
                    return l.spec.dimension();
                } else {
                    return l.n;
                }
            },
            layout_);
    }

    /// Sample spacing of a 1-D profile (radial or axial).
    double spacing() const {
        if (const auto* r = std::get_if<RadialProfile>(&layout_)) {
            return r->r_max / static_cast<double>(size() - 1);
        }
        if (const auto* a = std::get_if<AxialProfile>(&layout_)) {
            return a->length / static_cast<double>(size() - 1);
        }
        throw LayoutMismatch("spacing() is defined for 1-D profiles only");
    }

    ScalarField with_values(std::vector<double> v) const { return ScalarField(layout_, std::move(v)); }

    template <class F>
    ScalarField map(F&& f) const {
        std::vector<double> v(values_.size());
        parallel_for(v.size(), [&](std::size_t i) { v[i] = f(values_[i]); });
        return with_values(std::move(v));
    }

    double min() const { return *std::min_element(values_.begin(), values_.end()); }
    double max() const { return *std::max_element(values_.begin(), values_.end()); }
    double max_abs() const {
        double m = 0.0;
        for (double v : values_) {
            m = std::max(m, std::abs(v));
        }
        return m;
    }

    bool same_layout(const ScalarField& other) const { return layout_ == other.layout_; }

private:
    void validate() const {
        for (double v : values_) {
            if (!std::isfinite(v)) {
                throw DomainError("field values must be finite");
            }
        }
        std::visit(
            [&](const auto& l) {
                using L = std::decay_t<decltype(l)>;
                if constexpr (std::is_same_v<L, PeriodicGrid>) {
                    if (values_.size() != l.spec.total_points()) {
                        throw LayoutMismatch("grid field has " + std::to_string(values_.size()) +
                                             " values, expected " + std::to_string(l.spec.total_points()));
                    }
                } else if constexpr (std::is_same_v<L, RadialProfile>) {
                    if (!(l.r_max > 0.0)) {
                        throw PreconditionError("radial profile needs r_max > 0");
                    }
                    if (values_.size() < min_radial_samples) {
                        throw PreconditionError("radial profile needs at least 64 samples");
                    }
                } else {
                    if (!(l.length > 0.0)) {
                        throw PreconditionError("axial profile needs length > 0");
                    }
                    if (values_.size() < min_axial_samples) {
                        throw PreconditionError("axial profile needs at least 5 samples");
                    }
                }
            },
            layout_);
    }

    Layout layout_;
    std::vector<double> values_;
};

namespace detail {

inline void require_same_layout(const ScalarField& a, const ScalarField& b) {
    if (!a.same_layout(b)) {
        throw LayoutMismatch("fields live on different layouts");
    }
}

template <class Op>
ScalarField zip(const ScalarField& a, const ScalarField& b, Op op) {
    require_same_layout(a, b);
    std::vector<double> v(a.size());
    parallel_for(v.size(), [&](std::size_t i) { v[i] = op(a[i], b[i]); });
    return a.with_values(std::move(v));
}

} // namespace detail

inline ScalarField operator+(const ScalarField& a, const ScalarField& b) {
    return detail::zip(a, b, std::plus<>{});
}
inline ScalarField operator-(const ScalarField& a, const ScalarField& b) {
    return detail::zip(a, b, std::minus<>{});
}
inline ScalarField operator*(const ScalarField& a, const ScalarField& b) {
    return detail::zip(a, b, std::multiplies<>{});
}
inline ScalarField operator*(double c, const ScalarField& f) {
    return f.map([c](double v) { return c * v; });
}

// ---------------------------------------------------------------------------
// Periodic-grid stencils

/// Centered first difference along one axis.
inline ScalarField first_difference(const ScalarField& f, int axis) {
    const GridSpec& g = f.grid();
    const double inv2h = 0.5 / g.spacing(axis);
    std::vector<double> out(f.size());
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = (f[g.neighbor(i, axis, +1)] - f[g.neighbor(i, axis, -1)]) * inv2h;
    });
    return f.with_values(std::move(out));
}

/// Centered second difference along one axis.
inline ScalarField second_difference(const ScalarField& f, int axis) {
    const GridSpec& g = f.grid();
    const double h = g.spacing(axis);
    const double inv_h2 = 1.0 / (h * h);
    std::vector<double> out(f.size());
    parallel_for(out.size(), [&](std::size_t i) {
        out[i] = (f[g.neighbor(i, axis, +1)] + f[g.neighbor(i, axis, -1)] - 2.0 * f[i]) * inv_h2;
    });
    return f.with_values(std::move(out));
}

namespace detail {

inline ScalarField grid_laplacian(const ScalarField& f) {
    const GridSpec& g = f.grid();
    const int n = g.dimension().value();
    std::vector<double> inv_h2(n);
    for (int d = 0; d < n; ++d) {
        inv_h2[d] = 1.0 / (g.spacing(d) * g.spacing(d));
    }
    std::vector<double> out(f.size());
    parallel_for(out.size(), [&](std::size_t i) {
        const double center = 2.0 * f[i];
        double acc = 0.0;
        for (int d = 0; d < n; ++d) {
            acc += (f[g.neighbor(i, d, +1)] + f[g.neighbor(i, d, -1)] - center) * inv_h2[d];
        }
        out[i] = acc;
    });
    return f.with_values(std::move(out));
}

inline ScalarField radial_laplacian(const ScalarField& f) {
    const auto& layout = std::get<RadialProfile>(f.layout());
    const int n = layout.n.value();
    const std::size_t count = f.size();
    const double h = f.spacing();
    const double inv_h2 = 1.0 / (h * h);
    // Cubic extrapolation supplies the ghost value past r_max.
    const double ghost = 4.0 * f[count - 1] - 6.0 * f[count - 2] + 4.0 * f[count - 3] - f[count - 4];
    std::vector<double> out(count);
    for (std::size_t i = 1; i < count; ++i) {
        const double right = i + 1 < count ? f[i + 1] : ghost;
        const double r = static_cast<double>(i) * h;
        out[i] = (right - 2.0 * f[i] + f[i - 1]) * inv_h2 + (n - 1) * (right - f[i - 1]) / (2.0 * h * r);
    }
    if (layout.even_extension) {
        // f(-h) = f(h), and Δf(0) = n f''(0).
        out[0] = n * 2.0 * (f[1] - f[0]) * inv_h2;
    } else {
        out[0] = 3.0 * out[1] - 3.0 * out[2] + out[3];
    }
    return f.with_values(std::move(out));
}

inline double axial_second(std::span<const double> f, std::size_t i, double inv_h2) {
    const std::size_t last = f.size() - 1;
    if (i == 0) {
        return (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv_h2;
    }
    if (i == last) {
        return (2.0 * f[last] - 5.0 * f[last - 1] + 4.0 * f[last - 2] - f[last - 3]) * inv_h2;
    }
    return (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv_h2;
}

inline double axial_first(std::span<const double> f, std::size_t i, double h) {
    const std::size_t last = f.size() - 1;
    if (i == 0) {
        return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    }
    if (i == last) {
        return (3.0 * f[last] - 4.0 * f[last - 1] + f[last - 2]) / (2.0 * h);
    }
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

inline double radial_first(std::span<const double> f, std::size_t i, double h, bool even) {
    const std::size_t last = f.size() - 1;
    if (i == 0) {
        return even ? 0.0 : (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    }
    if (i == last) {
        return (3.0 * f[last] - 4.0 * f[last - 1] + f[last - 2]) / (2.0 * h);
    }
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

} // namespace detail

/// Δf: periodic second differences on grids, f'' + (n-1) f'/r on radial
/// profiles, f'' on axial profiles (t-dependent fields on the cylinder).
inline ScalarField laplacian(const ScalarField& f) {
    if (f.is_grid()) {
        return detail::grid_laplacian(f);
    }
    if (f.is_radial()) {
        return detail::radial_laplacian(f);
    }
    const double h = f.spacing();
    const double inv_h2 = 1.0 / (h * h);
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = detail::axial_second(f.values(), i, inv_h2);
    }
    return f.with_values(std::move(out));
}

/// Δ²f with the Laplacian stencil applied twice, so the grid operator is
/// exactly self-adjoint.
inline ScalarField bilaplacian(const ScalarField& f) {
    return laplacian(laplacian(f));
}

/// Derivative in the radial or axial variable.
inline ScalarField profile_derivative(const ScalarField& f) {
    const double h = f.spacing();
    std::vector<double> out(f.size());
    const bool radial = f.is_radial();
    const bool even = radial && std::get<RadialProfile>(f.layout()).even_extension;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = radial ? detail::radial_first(f.values(), i, h, even) : detail::axial_first(f.values(), i, h);
    }
    return f.with_values(std::move(out));
}

/// |∇f|² from centered first differences.
inline ScalarField gradient_sq(const ScalarField& f) {
    if (!f.is_grid()) {
        return profile_derivative(f).map([](double d) { return d * d; });
    }
    const GridSpec& g = f.grid();
    const int n = g.dimension().value();
    std::vector<double> inv2h(n);
    for (int d = 0; d < n; ++d) {
        inv2h[d] = 0.5 / g.spacing(d);
    }
    std::vector<double> out(f.size());
    parallel_for(out.size(), [&](std::size_t i) {
        double acc = 0.0;
        for (int d = 0; d < n; ++d) {
            const double dd = (f[g.neighbor(i, d, +1)] - f[g.neighbor(i, d, -1)]) * inv2h[d];
            acc += dd * dd;
        }
        out[i] = acc;
    });
    return f.with_values(std::move(out));
}

struct CylinderGradient {
    ScalarField axial_sq;
    ScalarField spherical_sq;
};

/// Splits |∇f|² on the cylinder into the axial part (∂_t f)² and the part
/// tangent to the S^{n-1} slices. Fields are t-profiles, so the latter is 0.
inline CylinderGradient gradient_split_cylinder(const ScalarField& f) {
    const auto* axial = std::get_if<AxialProfile>(&f.layout());
    if (axial == nullptr) {
        throw LayoutMismatch("gradient_split_cylinder expects an axial t-profile");
    }
    if (!axial->axisymmetric) {
        throw UnsupportedVariant("cylinder fields must depend on t only");
    }
    return {gradient_sq(f), f.with_values(std::vector<double>(f.size(), 0.0))};
}

// ---------------------------------------------------------------------------
// Quadrature

namespace detail {

template <class Term>
double integrate_term(const ScalarField& layout_of, const Term& term) {
    return std::visit(
        [&](const auto& l) -> double {
            using L = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<L, PeriodicGrid>) {
                return pairwise_sum(layout_of.size(), term) * l.spec.cell_volume();
            } else if constexpr (std::is_same_v<L, RadialProfile>) {
                const int n = l.n.value();
                const double h = layout_of.spacing();
                return sphere_area(n - 1) * quadrature::simpson(layout_of.size(), h, [&](std::size_t i) {
                           return term(i) * std::pow(static_cast<double>(i) * h, n - 1);
                       });
            } else {
                const double h = layout_of.spacing();
                return sphere_area(l.n.value() - 1) * quadrature::simpson(layout_of.size(), h, term);
            }
        },
        layout_of.layout());
}

} // namespace detail

/// ∫ f dv. Riemann sum on the torus, ω_{n-1} ∫ f r^{n-1} dr radially and
/// ω_{n-1} ∫ f dt over the cylinder, the 1-D integrals by composite Simpson.
inline double integrate(const ScalarField& f) {
    return detail::integrate_term(f, [&](std::size_t i) { return f[i]; });
}

/// ∫ f g dv without forming the product field.
inline double inner(const ScalarField& f, const ScalarField& g) {
    detail::require_same_layout(f, g);
    return detail::integrate_term(f, [&](std::size_t i) { return f[i] * g[i]; });
}

/// ∫ f^p dv. The outer power of the Paneitz quotient is applied by the caller.
inline double lp_mass(const ScalarField& f, const Rational& p) {
    const bool fractional = p.denominator() != 1;
    if (fractional && f.min() < 0.0) {
        throw DomainError("negative values under a fractional power");
    }
    const double pd = to_double(p);
    if (!fractional && p.numerator() >= 0 && p.numerator() <= 64) {
        const auto k = static_cast<int>(p.numerator());
        return detail::integrate_term(f, [&](std::size_t i) {
            double base = f[i];
            double acc = 1.0;
            for (int e = k; e > 0; e >>= 1) {
                if (e & 1) {
                    acc *= base;
                }
                base *= base;
            }
            return acc;
        });
    }
    return detail::integrate_term(f, [&](std::size_t i) { return std::pow(f[i], pd); });
}

} // namespace paneitz
