#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "paneitz/constructions/bubble.hpp"
#include "paneitz/constructions/connected_sum.hpp"
#include "paneitz/constructions/cutoff.hpp"
#include "paneitz/constructions/cylinder.hpp"
#include "paneitz/geometry.hpp"
#include "paneitz/paneitz.hpp"
#include "paneitz/parallel.hpp"
#include "paneitz/samples.hpp"
#include "paneitz_cli/acceptance.hpp"
#include "paneitz_cli/config.hpp"
#include "paneitz_cli/format.hpp"

namespace paneitz::cli {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct Certificate {
    std::string name;
    std::string inequality;
    bool passed = false;
    /// Signed distance to failure; >= 0 when the certificate holds.
    double margin = 0.0;
};

inline json to_json(const Certificate& c) {
    return {{"name", c.name}, {"inequality", c.inequality}, {"passed", c.passed}, {"margin", c.margin}};
}

struct Outcome {
    json results = json::object();
    std::vector<Certificate> certificates;
    Table table;
    std::vector<std::string> lines;
    json timing = json::object();

    bool passed() const {
        return std::all_of(certificates.begin(), certificates.end(), [](const Certificate& c) { return c.passed; });
    }
    void certify(std::string name, std::string inequality, double margin) {
        certificates.push_back({std::move(name), std::move(inequality), margin >= 0.0, margin});
    }
};

namespace experiments {

/// out[i] = f(i) on up to thread_count() workers, each writing its own slot.
template <class T, class F>
std::vector<T> map_indexed(std::size_t count, F&& f) {
    std::vector<T> out(count);
    const std::size_t workers = std::min<std::size_t>(thread_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            out[i] = f(i);
        }
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t i = w; i < count; i += workers) {
                        out[i] = f(i);
                    }
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

inline GridSpec grid_of(const ExperimentConfig& c) {
    return GridSpec::cube(Dimension(c.dimension), c.grid.points_per_axis, c.grid.side,
                          static_cast<std::size_t>(c.grid.budget));
}

inline MetricModel model_of(const ExperimentConfig& c) {
    const Dimension n(c.dimension);
    if (c.model.type == "sphere") {
        return RoundSphere{n, c.model.radius};
    }
    if (c.model.type == "cylinder") {
        return Cylinder{n, c.model.length};
    }
    return FlatTorus::cube(n, c.grid.side);
}

inline double field_value(const FieldConfig& f, double coordinate) {
    if (f.kind == "constant") {
        return f.value;
    }
    return f.value * (1.0 + f.amplitude * std::cos(coordinate));
}

inline ScalarField grid_field(const ExperimentConfig& c, const GridSpec& g, std::mt19937_64& rng) {
    if (c.field.axis >= c.dimension) {
        throw PreconditionError("field.axis must be below the dimension");
    }
    if (c.field.kind == "random") {
        return c.field.value * samples::trig_field(g, rng, 4, std::abs(c.field.amplitude));
    }
    const double k = 2.0 * std::numbers::pi / c.grid.side;
    return ScalarField::on_grid(g, [&](std::span<const double> x) { return field_value(c.field, k * x[c.field.axis]); });
}

inline ScalarField axial_field(const ExperimentConfig& c, std::mt19937_64& rng) {
    const Dimension n(c.dimension);
    const double l = c.model.length;
    const auto samples_count =
        std::max<std::size_t>(min_axial_samples, static_cast<std::size_t>(std::ceil(l * c.samples_per_unit)) + 1);
    if (c.field.kind == "random") {
        return c.field.value * samples::axial_profile(n, l, samples_count, rng, true);
    }
    const double pi = std::numbers::pi;
    return ScalarField::axial(n, l, samples_count, [&](double t) { return field_value(c.field, pi * t / l); });
}

inline Outcome curvature_cmd(const ExperimentConfig& c) {
    const MetricModel model = model_of(c);
    const CurvatureData k = curvature(model);
    Outcome o;
    o.results = {{"model", model_name(model)},
                 {"dimension", c.dimension},
                 {"R", k.R},
                 {"ricci_tangent", k.ricci_tangent},
                 {"ricci_normal", k.ricci_normal},
                 {"ric_norm_sq", k.ric_norm_sq},
                 {"lap_R", k.lap_R},
                 {"Q", k.Q},
                 {"volume", volume(model)}};
    o.table = {{"R", "ricci_tangent", "ricci_normal", "ric_norm_sq", "Q"},
               {{k.R, k.ricci_tangent, k.ricci_normal, k.ric_norm_sq, k.Q}}};
    o.lines.push_back("model=" + model_name(model) + " n=" + std::to_string(c.dimension));
    o.lines.push_back("R=" + format_double(k.R));
    if (c.model.type == "sphere") {
        o.lines.push_back("Ric eigenvalue=" + format_double(k.ricci_tangent));
    } else if (c.model.type == "cylinder") {
        o.lines.push_back("Ric eigenvalues: sphere=" + format_double(k.ricci_tangent) +
                          " axial=" + format_double(k.ricci_normal));
    } else {
        o.lines.push_back("Ric eigenvalue=" + format_double(k.ricci_normal));
    }
    o.lines.push_back("|Ric|^2=" + format_double(k.ric_norm_sq));
    o.lines.push_back("Q=" + format_double(k.Q));
    if (c.model.type == "sphere") {
        const double n = c.dimension;
        const double r = c.model.radius;
        const double closed = n * (n * n - 4.0) * (n - 4.0) / 16.0 / std::pow(r, 4);
        o.certify("sphere Q closed form", "|Q - n(n^2-4)(n-4)/(16 r^4)| <= 1e-12 Q",
                  1e-12 * closed - std::abs(k.Q - closed));
    }
    return o;
}

inline Outcome functional_cmd(const ExperimentConfig& c) {
    std::mt19937_64 rng(c.seed);
    const MetricModel model = model_of(c);
    const ScalarField u = [&] {
        if (c.model.type == "torus") {
            return grid_field(c, grid_of(c), rng);
        }
        if (c.model.type == "cylinder") {
            return axial_field(c, rng);
        }
        if (c.field.kind != "constant") {
            throw UnsupportedVariant("the sphere model only evaluates constant fields");
        }
        return ScalarField::axial(Dimension(c.dimension), 1.0, min_axial_samples,
                                  [&](double) { return c.field.value; });
    }();
    const QuotientReport q = functional(model, u);
    const LowerBoundConstants lb = lower_bound_constants(model);
    Outcome o;
    o.results = {{"model", q.model},     {"grid", q.grid},         {"numerator", q.numerator},
                 {"mass", q.mass},       {"quotient", q.quotient}, {"lower_bound", lb.bound},
                 {"C1", lb.C1},          {"C2", lb.C2}};
    o.table = {{"numerator", "mass", "quotient", "lower_bound"}, {{q.numerator, q.mass, q.quotient, lb.bound}}};
    o.lines.push_back("quotient=" + format_double(q.quotient));
    o.lines.push_back("lower_bound=" + format_double(lb.bound));
    o.certify("coercivity lower bound", "quotient >= -(C1^2/2 + C2) vol^(4/n)", q.quotient - lb.bound);
    return o;
}

inline Outcome bubble_cmd(const ExperimentConfig& c) {
    const Dimension n(c.dimension);
    const FlatTorus host = FlatTorus::cube(n, c.grid.side);
    const EuclideanBubble oracle = euclidean_bubble_quotient(n);
    const auto reports = map_indexed<BubbleReport>(c.sweep.size(), [&](std::size_t i) {
        return bubble_quotient(BubbleParams{c.sweep[i], n}, host, oracle.quotient);
    });
    Outcome o;
    o.table.header = {"epsilon", "numerator", "mass", "quotient", "oracle", "rel_err"};
    json rows = json::array();
    for (const BubbleReport& r : reports) {
        o.table.rows.push_back({r.epsilon, r.quotient.numerator, r.quotient.mass, r.quotient.quotient, r.oracle,
                                r.rel_err});
        rows.push_back({{"epsilon", r.epsilon},
                        {"numerator", r.quotient.numerator},
                        {"mass", r.quotient.mass},
                        {"quotient", r.quotient.quotient},
                        {"rel_err", r.rel_err},
                        {"transition_energy", r.transition_energy}});
        o.lines.push_back("epsilon=" + format_double(r.epsilon) + " quotient=" + format_double(r.quotient.quotient) +
                          " rel_err=" + format_double(r.rel_err));
    }
    o.results = {{"oracle", oracle.quotient},
                 {"oracle_error_estimate", oracle.error_estimate},
                 {"sphere_constant_intrinsic", sphere_constant_intrinsic(n)},
                 {"sweep", rows}};
    if (!reports.empty()) {
        const double tol = c.tolerances.relative.value_or(thresholds::bubble);
        o.certify("bubble upper bound", "rel_err at smallest epsilon <= " + format_double(tol),
                  tol - reports.back().rel_err);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = reports.size() > 3 ? reports.size() - 3 : 0; i + 1 < reports.size(); ++i) {
            worst = std::min(worst, reports[i].rel_err - reports[i + 1].rel_err);
        }
        if (reports.size() > 1) {
            o.certify("sweep decreasing", "rel_err decreases over the last two steps", worst);
        }
    }
    return o;
}

inline Outcome cutoff_cmd(const ExperimentConfig& c) {
    std::mt19937_64 rng(c.seed);
    const GridSpec g = grid_of(c);
    const ScalarField u = grid_field(c, g, rng);
    const CutoffSweepReport r = cutoff_sweep(FlatTorus::cube(g.dimension(), c.grid.side), u, c.sweep);
    const double order = r.fitted_order.value_or(std::numeric_limits<double>::quiet_NaN());
    Outcome o;
    o.table.header = {"delta", "quotient", "delta_quotient", "fitted_order"};
    json rows = json::array();
    for (const CutoffSweepRow& row : r.rows) {
        o.table.rows.push_back({row.delta, row.quotient, row.delta_quotient, order});
        rows.push_back({{"delta", row.delta},
                        {"quotient", row.quotient},
                        {"delta_quotient", row.delta_quotient},
                        {"energy_change", row.energy_change},
                        {"mass_change", row.mass_change},
                        {"C0", row.constants.C0}});
        o.lines.push_back("delta=" + format_double(row.delta) + " delta_quotient=" + format_double(row.delta_quotient));
    }
    o.results = {{"base_quotient", r.base_quotient}, {"sweep", rows}};
    o.results["fitted_order"] = r.fitted_order ? json(*r.fitted_order) : json(nullptr);
    o.lines.push_back("fitted_order=" + (r.fitted_order ? format_double(*r.fitted_order) : std::string("none")));
    if (r.rows.size() > 1) {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < r.rows.size(); ++i) {
            worst = std::min(worst, std::abs(r.rows[i - 1].delta_quotient) - std::abs(r.rows[i].delta_quotient));
        }
        o.certify("cutoff differences decrease", "|dQ(delta)| decreases as delta shrinks", worst);
        const double tol = c.tolerances.order.value_or(thresholds::cutoff_order);
        o.certify("cutoff order", "fitted order >= " + format_double(tol),
                  r.fitted_order ? *r.fitted_order - tol : -std::numeric_limits<double>::infinity());
    }
    return o;
}

inline Outcome connected_sum_cmd(const ExperimentConfig& c) {
    const GridSpec g = grid_of(c);
    const int n = c.dimension;
    const double delta = c.neck_delta;
    auto side = [&](std::vector<double> center, int axis) {
        const ScalarField f = cutoff_family(CutoffParams{delta, center}, g).field;
        const double k = 2.0 * std::numbers::pi / c.grid.side;
        const auto u = ScalarField::on_grid(g, [&](std::span<const double> x) { return field_value(c.field, k * x[axis]); });
        return ConnectedSumSide{FlatTorus{g.dimension(), g.side_lengths()}, f * u, {std::move(center), delta},
                                std::nullopt};
    };
    const int axis = c.field.axis % n;
    const ConnectedSumInput in{side(std::vector<double>(n, 0.0), axis),
                               side(std::vector<double>(n, 0.5 * c.grid.side), (axis + 1) % n), c.epsilon};
    const ConnectedSumReport r = connected_sum_quotient(in);
    Outcome o;
    o.table.header = {"side", "energy", "mass", "quotient", "lambda_lower_bound"};
    for (int i = 0; i < 2; ++i) {
        o.table.rows.push_back({static_cast<double>(i + 1), r.energy[i], r.mass[i], r.quotient[i],
                                r.lambda_lower_bound[i]});
    }
    o.results = {{"energy", r.energy},
                 {"mass", r.mass},
                 {"quotient", r.quotient},
                 {"lambda_lower_bound", r.lambda_lower_bound},
                 {"min_form", r.min_form},
                 {"sum_form", r.sum_form},
                 {"sum_form_assembled", r.sum_form_assembled},
                 {"epsilon", r.epsilon},
                 {"epsilon1", r.epsilon1},
                 {"regime", r.regime}};
    o.lines.push_back("min_form=" + format_double(r.min_form) + " sum_form=" + format_double(r.sum_form));
    o.lines.push_back("epsilon=" + format_double(r.epsilon));
    const double q = std::pow(2.0, -static_cast<double>(n - 4) / n);
    const double lsum = r.lambda_lower_bound[0] + r.lambda_lower_bound[1];
    const double lmin = std::min(r.lambda_lower_bound[0], r.lambda_lower_bound[1]);
    o.certify("min-form", "min-form <= min(Q1, Q2)", std::min(r.quotient[0], r.quotient[1]) - r.min_form);
    o.certify("min-form budget", "min-form < min(L1, L2) + epsilon",
              r.min_form_within_budget ? lmin + r.epsilon - r.min_form : -std::abs(lmin + r.epsilon - r.min_form));
    o.certify("sum-form identity", "assembled sum-form == (Q1 + Q2) 2^(-(n-4)/n) to 1e-12",
              r.sum_form_identity ? 0.0 : -std::abs(r.sum_form_assembled - r.sum_form));
    o.certify("side budgets", "Q_i < L_i + epsilon1",
              r.sides_within_budget ? std::min(r.lambda_lower_bound[0] + r.epsilon1 - r.quotient[0],
                                               r.lambda_lower_bound[1] + r.epsilon1 - r.quotient[1])
                                    : -1.0);
    o.certify("sum-form budget", "sum-form < (L1 + L2) 2^(-(n-4)/n) + epsilon",
              r.sum_form_within_budget ? lsum * q + r.epsilon - r.sum_form : -1.0);
    o.certify("epsilon bookkeeping", "(L1 + L2 + 2 epsilon1) 2^(-(n-4)/n) == (L1 + L2) 2^(-(n-4)/n) + epsilon",
              r.epsilon_identity ? 0.0 : -1.0);
    return o;
}

inline Outcome cylinder_cmd(const ExperimentConfig& c) {
    const Dimension n(c.dimension);
    const CylinderPositivity pos = cylinder_positivity(n);
    const auto rows = map_indexed<std::vector<CylinderSweepRow>>(
        c.sweep.size(), [&](std::size_t i) { return cylinder_sweep(n, {c.sweep[i]}, c.samples_per_unit); });
    const CollarExtension unit = extend_over_collar(n, 1.0);
    Outcome o;
    o.table.header = {"length", "total", "slice_t", "slice_value", "mean", "collar_energy"};
    json sweep = json::array();
    double slice_margin = std::numeric_limits<double>::infinity();
    for (const auto& one : rows) {
        const CylinderSweepRow& r = one.front();
        o.table.rows.push_back({r.length, r.total, r.slice_t, r.slice_value, r.mean, r.collar_energy});
        sweep.push_back({{"length", r.length},
                         {"total", r.total},
                         {"slice_t", r.slice_t},
                         {"slice_value", r.slice_value},
                         {"mean", r.mean},
                         {"collar_energy", r.collar_energy},
                         {"collar_times_length", r.collar_energy * r.length}});
        slice_margin = std::min(slice_margin, r.mean - r.slice_value);
        o.lines.push_back("length=" + format_double(r.length) + " slice_value=" + format_double(r.slice_value) +
                          " collar_energy=" + format_double(r.collar_energy));
    }
    o.results = {{"Q", pos.Q},
                 {"a_n_R", pos.a_n_R},
                 {"spherical_eigenvalue", pos.spherical_eigenvalue},
                 {"axial_eigenvalue", pos.axial_eigenvalue},
                 {"collar_unit", {{"energy", unit.energy}, {"closed_form", unit.closed_form}}},
                 {"sweep", sweep}};
    o.lines.push_back("Q_cyl=" + format_double(pos.Q));
    o.certify("cylinder positivity", "Q > 0 and both gradient eigenvalues > 0",
              std::min({pos.Q, pos.spherical_eigenvalue, pos.axial_eigenvalue}));
    if (!rows.empty()) {
        o.certify("cheapest slice", "slice_value <= mean slice energy", slice_margin);
    }
    const double tol = c.tolerances.identity.value_or(thresholds::collar);
    o.certify("collar closed form", "|energy - closed form| <= " + format_double(tol) + " closed form",
              tol * unit.closed_form - std::abs(unit.energy - unit.closed_form));
    return o;
}

inline Outcome verify_cmd(const ExperimentConfig& c, const std::function<void(const Criterion&)>& on_done) {
    if (c.dimension != 5) {
        throw PreconditionError("verify runs the five-dimensional acceptance suite; use --dimension 5");
    }
    const std::vector<Criterion> criteria = run_acceptance(c.seed, on_done);
    Outcome o;
    o.table.header = {"criterion", "passed", "value", "threshold"};
    json timing = json::object();
    for (const Criterion& k : criteria) {
        o.table.rows.push_back({static_cast<double>(k.id), k.passed ? 1.0 : 0.0, k.value, k.threshold});
        o.certificates.push_back({"criterion " + std::to_string(k.id) + ": " + k.name,
                                  "value " + k.comparison + " " + format_double(k.threshold), k.passed,
                                  k.margin()});
        timing["criterion_" + std::to_string(k.id) + "_seconds"] = k.seconds;
    }
    o.results = {{"criteria", criteria_json(criteria)}};
    o.timing = timing;
    return o;
}

} // namespace experiments

inline Outcome run_experiment(const ExperimentConfig& c, const std::function<void(const Criterion&)>& on_done = {}) {
    using namespace experiments;
    if (c.command == "curvature") {
        return curvature_cmd(c);
    }
    if (c.command == "functional") {
        return functional_cmd(c);
    }
    if (c.command == "bubble-sweep") {
        return bubble_cmd(c);
    }
    if (c.command == "cutoff-sweep") {
        return cutoff_cmd(c);
    }
    if (c.command == "connected-sum") {
        return connected_sum_cmd(c);
    }
    if (c.command == "cylinder") {
        return cylinder_cmd(c);
    }
    if (c.command == "verify") {
        return verify_cmd(c, on_done);
    }
    throw PreconditionError("unknown command '" + c.command + "'");
}

} // namespace paneitz::cli
