#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "paneitz/core.hpp"
#include "paneitz/fields.hpp"
#include "paneitz/geometry.hpp"
#include "paneitz/measure.hpp"
#include "paneitz/paneitz.hpp"
#include "paneitz/quadrature.hpp"

namespace paneitz {

struct CylinderPositivity {
    double a_n_R = 0.0;
    double spherical_eigenvalue = 0.0; // a_n R - ricci_coeff (n-2)
    double axial_eigenvalue = 0.0;     // a_n R
    double Q = 0.0;
    bool positive = false;
};

inline CylinderPositivity cylinder_positivity(Dimension n) {
    const Cylinder cyl{n, 1.0};
    const CurvatureData c = curvature(cyl);
    const auto a = detail::gradient_tensor(c, n);
    CylinderPositivity r;
    r.a_n_R = to_double(coefficients(n).a_n) * c.R;
    r.spherical_eigenvalue = a.tangent;
    r.axial_eigenvalue = a.axial;
    r.Q = c.Q;
    r.positive = r.Q > 0.0 && r.spherical_eigenvalue > 0.0 && r.axial_eigenvalue > 0.0;
    return r;
}

struct SliceResult {
    double t = 0.0;
    double value = 0.0;
    double mean = 0.0;
};

/// The slice of smallest density and the mean density (∫ density dt)/l.
/// The minimum never exceeds the mean: Simpson weights are positive.
inline SliceResult slice_finder(const ScalarField& density) {
    const auto* a = std::get_if<AxialProfile>(&density.layout());
    if (a == nullptr) {
        throw LayoutMismatch("slice_finder expects a density on [0, l]");
    }
    if (density.size() == 0) {
        throw DegenerateInput("empty interval");
    }
    if (density.min() < 0.0) {
        throw DomainError("slice densities must be nonnegative");
    }
    const auto values = density.values();
    const auto it = std::min_element(values.begin(), values.end());
    const auto idx = static_cast<std::size_t>(it - values.begin());
    SliceResult r;
    r.t = static_cast<double>(idx) * density.spacing();
    r.value = *it;
    r.mean = quadrature::simpson(density.size(), density.spacing(), [&](std::size_t i) { return density[i]; }) /
             a->length;
    return r;
}

struct CylinderEnergyProfile {
    double total = 0.0;
    /// Energy per slice {t} x S^{n-1}, i.e. vol(S^{n-1}) times the pointwise
    /// density.
    ScalarField density;
};

inline CylinderEnergyProfile cylinder_energy_profile(Dimension n, double l, const ScalarField& u) {
    const Cylinder cyl{n, l};
    const double area = sphere_area(n.value() - 1);
    ScalarField density = area * detail::cylinder_density(cyl, u);
    const double total =
        quadrature::simpson(density.size(), density.spacing(), [&](std::size_t i) { return density[i]; });
    return {total, std::move(density)};
}

struct CollarExtension {
    double energy = 0.0;      // quadrature of the extension
    double closed_form = 0.0; // vol(S^{n-1}) f² (a_n R + Q/3)
};

/// Paneitz energy of F(t) = (1 - t) f on the unit collar [0,1] x S^{n-1} for
/// constant slice data f.
inline CollarExtension extend_over_collar(Dimension n, double boundary_value, std::size_t samples = 1025) {
    const ScalarField F =
        ScalarField::axial(n, 1.0, samples, [boundary_value](double t) { return (1.0 - t) * boundary_value; });
    CollarExtension r;
    r.energy = cylinder_energy_profile(n, 1.0, F).total;
    const CurvatureData c = curvature(Cylinder{n, 1.0});
    const double anR = to_double(coefficients(n).a_n) * c.R;
    r.closed_form = sphere_area(n.value() - 1) * boundary_value * boundary_value * (anR + c.Q / 3.0);
    return r;
}

struct CylinderSweepRow {
    double length = 0.0;
    double total = 0.0;
    double slice_t = 0.0;
    double slice_value = 0.0;
    double mean = 0.0;
    double collar_energy = 0.0;
};

/// Runs the handle mechanisms for each length l: a unit-mass t-profile
/// f_l(t) = c (1 + ½ sin²(π t / l)), its energy, the cheapest slice and the
/// cost of closing the cylinder off from that slice.
inline std::vector<CylinderSweepRow> cylinder_sweep(Dimension n, const std::vector<double>& lengths,
                                                    double samples_per_unit = 64.0) {
    std::vector<CylinderSweepRow> rows;
    const double p = to_double(exponents(n).critical_exponent);
    for (double l : lengths) {
        if (!(l > 0.0)) {
            throw PreconditionError("cylinder length must be positive");
        }
        const auto samples = std::max<std::size_t>(65, static_cast<std::size_t>(std::ceil(l * samples_per_unit)) + 1);
        const double pi = std::numbers::pi;
        ScalarField f = ScalarField::axial(n, l, samples, [&](double t) {
            const double s = std::sin(pi * t / l);
            return 1.0 + 0.5 * s * s;
        });
        const double m = critical_mass(Cylinder{n, l}, f);
        f = std::pow(m, -1.0 / p) * f;
        const CylinderEnergyProfile e = cylinder_energy_profile(n, l, f);
        const SliceResult s = slice_finder(e.density);
        const auto slice_index = static_cast<std::size_t>(std::llround(s.t / f.spacing()));
        CylinderSweepRow row;
        row.length = l;
        row.total = e.total;
        row.slice_t = s.t;
        row.slice_value = s.value;
        row.mean = s.mean;
        row.collar_energy = extend_over_collar(n, f[slice_index]).energy;
        rows.push_back(row);
    }
    return rows;
}

} // namespace paneitz
