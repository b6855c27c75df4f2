#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "paneitz/constructions/bubble.hpp"
#include "paneitz/constructions/connected_sum.hpp"
#include "paneitz/constructions/cutoff.hpp"
#include "paneitz/constructions/cylinder.hpp"
#include "paneitz/core.hpp"
#include "paneitz/geometry.hpp"
#include "paneitz/paneitz.hpp"
#include "paneitz/samples.hpp"
#include "paneitz_cli/format.hpp"

namespace paneitz::cli {

using nlohmann::json;

/// Pinned acceptance thresholds.
namespace thresholds {
inline constexpr double self_adjoint = 1e-12;
inline constexpr double constant_covariance = 1e-12;
inline constexpr double covariance_order = 1.8;
inline constexpr double two_oracle = 0.005;
inline constexpr double bubble = 0.02;
inline constexpr double cutoff_order = 0.7;
inline constexpr double sum_form = 1e-12;
inline constexpr double collar = 1e-12;
} // namespace thresholds

struct Criterion {
    int id = 0;
    std::string name;
    bool passed = false;
    /// Headline measurement and the bound it is compared with.
    double value = 0.0;
    double threshold = 0.0;
    std::string comparison;
    json details = json::object();
    double seconds = 0.0;
    std::string note;

    /// Signed distance of value from threshold, >= 0 on the passing side.
    double margin() const {
        if (comparison == "<=") {
            return threshold - value;
        }
        if (comparison == ">=") {
            return value - threshold;
        }
        return value == threshold ? 0.0 : -std::abs(value - threshold);
    }
};

inline json to_json(const Criterion& c) {
    return {{"id", c.id},       {"name", c.name},           {"passed", c.passed},
            {"value", c.value}, {"threshold", c.threshold}, {"comparison", c.comparison},
            {"details", c.details}, {"note", c.note}};
}

inline std::string determinism_hash(const json& j) { return hex64(fnv1a64(j.dump())); }

namespace acceptance {

constexpr double two_pi = 2.0 * std::numbers::pi;

inline Criterion criterion(int id, std::string name, double threshold, std::string comparison) {
    Criterion c;
    c.id = id;
    c.name = std::move(name);
    c.threshold = threshold;
    c.comparison = std::move(comparison);
    return c;
}

inline double rel(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

inline Criterion coefficients_suite() {
    Criterion c = criterion(1, "coefficient and identity suite", 0.0, "==");
    int checked = 0;
    int failures = 0;
    auto check = [&](bool ok) {
        ++checked;
        failures += ok ? 0 : 1;
    };
    for (int k = 5; k <= 64; ++k) {
        const Dimension n(k);
        const auto e = exponents(n);
        const auto co = coefficients(n);
        check(e.equation_power + 1 == e.critical_exponent);
        check(e.critical_exponent * e.quotient_power == Rational(2));
        check(e.metric_power == e.critical_exponent - Rational(2 * (k - 2), k - 4));
        check(e.critical_exponent == Rational(2 * k, k - 4));
        check(e.quotient_power == Rational(k - 4, k));
        check(co.a_n == Rational((k - 2) * (k - 2) + 4, 2 * (k - 1) * (k - 2)));
        check(co.ricci_coeff == Rational(4, k - 2));
        check(co.q_lap_coeff == Rational(k - 4, 4 * (k - 1)));
        check(co.q_ric_coeff == Rational(k - 4, (k - 2) * (k - 2)));
        // Q of the unit sphere from the coefficients, exactly:
        // R = n(n-1), |Ric|² = n(n-1)², ΔR = 0.
        const Rational R(k * (k - 1));
        const Rational ric(k * (k - 1) * (k - 1));
        check(co.q_scal_coeff * R * R - co.q_ric_coeff * ric == Rational(k * (k * k - 4) * (k - 4), 16));
        check(q_curvature(0.0, 0.0, 0.0, n) == 0.0);
    }
    c.value = failures;
    c.passed = failures == 0;
    c.details = {{"dimensions", "5..64"}, {"identities_checked", checked}, {"failures", failures}};
    return c;
}

inline Criterion self_adjointness(std::uint64_t seed) {
    Criterion c = criterion(2, "discrete self-adjointness", thresholds::self_adjoint, "<=");
    std::mt19937_64 rng(seed);
    json rows = json::array();
    double worst = 0.0;
    for (int points : {12, 16}) {
        const GridSpec g = GridSpec::cube(Dimension(5), points, two_pi);
        const ScalarField f = samples::noise_field(g, rng);
        const ScalarField h = samples::noise_field(g, rng);
        const ScalarField lf = laplacian(f);
        const ScalarField lh = laplacian(h);
        double scale = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            scale += std::abs(f[i] * lh[i]);
        }
        const double sym = std::abs(inner(f, lh) - inner(lf, h)) / scale;
        const double e = inner(lf, lf);
        const double bilap = std::abs(inner(f, bilaplacian(f)) - e) / e;
        worst = std::max({worst, sym, bilap});
        rows.push_back({{"points_per_axis", points}, {"laplacian_symmetry", sym}, {"bilaplacian_energy", bilap}});
    }
    c.value = worst;
    c.passed = worst <= c.threshold;
    c.details = {{"grids", rows}};
    return c;
}

inline Criterion covariance() {
    Criterion c = criterion(3, "conformal covariance", thresholds::covariance_order, ">=");
    const GridSpec g10 = GridSpec::cube(Dimension(5), 10, two_pi);
    const ScalarField w0 = ScalarField::on_grid(g10, [](auto) { return 1.7; });
    const ScalarField u0 =
        ScalarField::on_grid(g10, [](auto x) { return 1.0 + 0.05 * std::sin(x[0]) * std::cos(x[4]); });
    const double constant = covariance_check(w0, u0, thresholds::constant_covariance).relative;

    std::vector<double> h;
    std::vector<double> res;
    json rows = json::array();
    for (int points : {12, 14, 16}) {
        const GridSpec g = GridSpec::cube(Dimension(5), points, two_pi);
        const auto w = ScalarField::on_grid(g, [](auto x) { return 1.0 + 0.3 * std::cos(x[0] + x[1]); });
        const auto u = ScalarField::on_grid(g, [](auto x) { return 1.0 + 0.3 * std::sin(x[0]) * std::cos(x[2]); });
        const CovarianceReport r = covariance_check(w, u, 1.0);
        h.push_back(two_pi / points);
        res.push_back(r.residual);
        rows.push_back({{"points_per_axis", points}, {"residual", r.residual}, {"relative", r.relative}});
    }
    const auto order = fit_log_slope(h, res);
    const bool decreasing = res[0] > res[1] && res[1] > res[2];
    c.value = order.value_or(std::numeric_limits<double>::quiet_NaN());
    c.passed = constant <= thresholds::constant_covariance && decreasing && order && *order >= c.threshold;
    c.details = {{"constant_factor_relative", constant},
                 {"constant_factor_threshold", thresholds::constant_covariance},
                 {"smooth_factor", rows},
                 {"residual_decreasing", decreasing},
                 {"fitted_order", c.value}};
    return c;
}

inline Criterion two_oracle() {
    Criterion c = criterion(4, "sphere constant two-oracle agreement", thresholds::two_oracle, "<=");
    json rows = json::array();
    double worst = 0.0;
    for (int k : {5, 6, 7}) {
        const Dimension n(k);
        const double euclid = euclidean_bubble_quotient(n).quotient;
        const double intrinsic = sphere_constant_intrinsic(n);
        const double err = std::abs(euclid - intrinsic) / intrinsic;
        worst = std::max(worst, err);
        rows.push_back({{"n", k}, {"euclidean", euclid}, {"intrinsic", intrinsic}, {"relative", err}});
    }
    c.value = worst;
    c.passed = worst <= c.threshold;
    c.details = {{"dimensions", rows}};
    return c;
}

inline Criterion bubble_bound() {
    Criterion c = criterion(5, "bubble upper bound on the flat 5-torus", thresholds::bubble, "<=");
    const Dimension n(5);
    const FlatTorus host = FlatTorus::cube(n, two_pi);
    const double oracle = euclidean_bubble_quotient(n).quotient;
    json rows = json::array();
    std::vector<double> errs;
    for (double eps : {0.4, 0.2, 0.1, 0.05}) {
        const BubbleReport r = bubble_quotient(BubbleParams{eps, n}, host, oracle);
        errs.push_back(r.rel_err);
        rows.push_back({{"epsilon", eps},
                        {"quotient", r.quotient.quotient},
                        {"rel_err", r.rel_err},
                        {"transition_energy", r.transition_energy}});
    }
    const bool decreasing = errs[1] < errs[0] && errs[2] < errs[1] && errs[3] < errs[2];
    c.value = errs.back();
    c.passed = decreasing && errs.back() <= c.threshold;
    const BubbleReport extra = bubble_quotient(BubbleParams{0.025, n}, host, oracle);
    c.details = {{"oracle", oracle},
                 {"sweep", rows},
                 {"decreasing_last_steps", decreasing},
                 {"informational_epsilon_0.025", {{"quotient", extra.quotient.quotient}, {"rel_err", extra.rel_err}}}};
    c.note = "informational, not counted: epsilon=0.025 rel_err=" + format_double(extra.rel_err);
    return c;
}

inline Criterion lower_bound(std::uint64_t seed) {
    Criterion c = criterion(6, "lower bound on seeded random fields", 0.0, "==");
    std::mt19937_64 rng(seed);
    const Dimension n(5);
    const GridSpec g = GridSpec::cube(n, 12, two_pi);
    std::vector<ScalarField> torus_samples;
    for (int i = 0; i < 20; ++i) {
        torus_samples.push_back(samples::trig_field(g, rng));
    }
    const LowerBoundReport torus = verify_lower_bound(FlatTorus::cube(n, two_pi), torus_samples);
    const double l = 10.0;
    std::vector<ScalarField> cyl_samples;
    for (int i = 0; i < 20; ++i) {
        cyl_samples.push_back(samples::axial_profile(n, l, 401, rng, true));
    }
    const LowerBoundReport cyl = verify_lower_bound(Cylinder{n, l}, cyl_samples);
    c.value = torus.failures + cyl.failures;
    c.passed = c.value == 0.0 && torus.quotients.size() == 20 && cyl.quotients.size() == 20;
    c.details = {
        {"torus", {{"samples", 20}, {"bound", torus.constants.bound}, {"margin", torus.margin}, {"failures", torus.failures}}},
        {"cylinder", {{"samples", 20}, {"bound", cyl.constants.bound}, {"margin", cyl.margin}, {"failures", cyl.failures}}}};
    return c;
}

inline Criterion cutoff_convergence() {
    Criterion c = criterion(7, "cutoff convergence", thresholds::cutoff_order, ">=");
    const Dimension n(5);
    const GridSpec g = GridSpec::cube(n, 16, two_pi);
    const auto u = ScalarField::on_grid(g, [](auto x) { return 1.0 + 0.2 * std::cos(x[0]); });
    const CutoffSweepReport r = cutoff_sweep(FlatTorus::cube(n, two_pi), u, {0.2, 0.1, 0.05});
    json rows = json::array();
    bool decreasing = true;
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        rows.push_back({{"delta", r.rows[i].delta},
                        {"quotient", r.rows[i].quotient},
                        {"delta_quotient", r.rows[i].delta_quotient},
                        {"C0", r.rows[i].constants.C0}});
        if (i > 0 && !(std::abs(r.rows[i].delta_quotient) < std::abs(r.rows[i - 1].delta_quotient))) {
            decreasing = false;
        }
    }
    c.value = r.fitted_order.value_or(std::numeric_limits<double>::quiet_NaN());
    c.passed = decreasing && r.fitted_order && *r.fitted_order >= c.threshold;
    c.details = {{"base_quotient", r.base_quotient}, {"sweep", rows}, {"decreasing", decreasing}};
    return c;
}

inline Criterion connected_sum() {
    Criterion c = criterion(8, "connected-sum certificates", thresholds::sum_form, "<=");
    const GridSpec g = GridSpec::cube(Dimension(5), 12, two_pi);
    const double delta = 0.6;
    auto side = [&](std::vector<double> center, int axis) {
        const ScalarField f = cutoff_family(CutoffParams{delta, center}, g).field;
        const auto u = ScalarField::on_grid(g, [axis](auto x) { return 1.0 + 0.2 * std::cos(x[axis]); });
        return ConnectedSumSide{FlatTorus{g.dimension(), g.side_lengths()}, f * u, {std::move(center), delta},
                                std::nullopt};
    };
    const ConnectedSumInput in{side(std::vector<double>(5, 0.0), 0), side(std::vector<double>(5, std::numbers::pi), 1),
                               std::nullopt};
    const ConnectedSumReport r = connected_sum_quotient(in);
    c.value = rel(r.sum_form_assembled, r.sum_form);
    c.passed = r.passed() && c.value <= c.threshold;
    c.details = {{"quotients", r.quotient},
                 {"lambda_lower_bounds", r.lambda_lower_bound},
                 {"min_form", r.min_form},
                 {"sum_form", r.sum_form},
                 {"sum_form_assembled", r.sum_form_assembled},
                 {"epsilon", r.epsilon},
                 {"epsilon1", r.epsilon1},
                 {"min_form_certificate", r.min_form_certificate},
                 {"sides_within_budget", r.sides_within_budget},
                 {"sum_form_within_budget", r.sum_form_within_budget},
                 {"epsilon_identity", r.epsilon_identity}};
    return c;
}

inline Criterion cylinder_suite(std::uint64_t seed) {
    Criterion c = criterion(9, "cylinder suite", thresholds::collar, "<=");
    bool positivity = true;
    double collar_worst = 0.0;
    for (int k = 5; k <= 10; ++k) {
        positivity = positivity && cylinder_positivity(Dimension(k)).positive;
        const CollarExtension e = extend_over_collar(Dimension(k), 1.0);
        collar_worst = std::max(collar_worst, rel(e.energy, e.closed_form));
    }
    std::mt19937_64 rng(seed);
    int slice_failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double l = samples::uniform(rng, 1.0, 40.0);
        const auto count = static_cast<std::size_t>(samples::uniform(rng, 5.0, 400.0));
        const SliceResult s = slice_finder(samples::density(Dimension(5), l, count, rng));
        slice_failures += s.value <= s.mean ? 0 : 1;
    }
    int energy_failures = 0;
    double min_total = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < 20; ++trial) {
        const Dimension n(5 + trial % 6);
        const double l = samples::uniform(rng, 1.0, 20.0);
        const ScalarField u = samples::axial_profile(n, l, 257, rng, false);
        const double total = cylinder_energy_profile(n, l, u).total;
        min_total = std::min(min_total, total);
        energy_failures += (u.max_abs() > 0.0 && total > 0.0) ? 0 : 1;
    }
    c.value = collar_worst;
    c.passed = positivity && slice_failures == 0 && energy_failures == 0 && collar_worst <= c.threshold;
    c.details = {{"positivity_5_to_10", positivity},
                 {"slice_trials", 100},
                 {"slice_failures", slice_failures},
                 {"collar_relative_error", collar_worst},
                 {"energy_trials", 20},
                 {"energy_failures", energy_failures},
                 {"min_total_energy", min_total}};
    return c;
}

template <class F>
Criterion timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    Criterion c = f();
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

} // namespace acceptance

/// Criteria 1 to 9. Randomized suites draw from seed + id.
inline std::vector<Criterion> run_criteria(std::uint64_t seed,
                                           const std::function<void(const Criterion&)>& on_done = {}) {
    using namespace acceptance;
    const std::vector<std::function<Criterion()>> suites{
        [] { return coefficients_suite(); },
        [seed] { return self_adjointness(seed + 2); },
        [] { return covariance(); },
        [] { return two_oracle(); },
        [] { return bubble_bound(); },
        [seed] { return lower_bound(seed + 6); },
        [] { return cutoff_convergence(); },
        [] { return connected_sum(); },
        [seed] { return cylinder_suite(seed + 9); },
    };
    std::vector<Criterion> out;
    for (const auto& s : suites) {
        out.push_back(timed(s));
        if (on_done) {
            on_done(out.back());
        }
    }
    return out;
}

inline json criteria_json(const std::vector<Criterion>& cs) {
    json a = json::array();
    for (const Criterion& c : cs) {
        a.push_back(to_json(c));
    }
    return a;
}

/// All ten criteria. Criterion 10 runs 1 to 9 a second time with the same
/// seed and compares the hashes of the two result sets.
inline std::vector<Criterion> run_acceptance(std::uint64_t seed,
                                             const std::function<void(const Criterion&)>& on_done = {}) {
    std::vector<Criterion> first = run_criteria(seed, on_done);
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<Criterion> second = run_criteria(seed);
    const std::string h1 = determinism_hash(criteria_json(first));
    const std::string h2 = determinism_hash(criteria_json(second));
    Criterion c = acceptance::criterion(10, "determinism", 1.0, "==");
    c.passed = h1 == h2;
    c.value = h1 == h2 ? 1.0 : 0.0;
    c.details = {{"first_hash", h1}, {"second_hash", h2}, {"seed", seed}};
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    first.push_back(c);
    if (on_done) {
        on_done(first.back());
    }
    return first;
}

inline std::string summary_line(const Criterion& c) {
    std::string s = std::string(c.passed ? "PASS" : "FAIL") + " criterion " + std::to_string(c.id) + " (" + c.name +
                    "): value=" + format_double(c.value) + " " + c.comparison + " " + format_double(c.threshold);
    if (!c.note.empty()) {
        s += "\n    " + c.note;
    }
    return s;
}

} // namespace paneitz::cli
