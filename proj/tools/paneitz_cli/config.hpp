#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace paneitz::cli {

using nlohmann::json;

inline const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"curvature",     "functional", "bubble-sweep", "cutoff-sweep",
                                                "connected-sum", "cylinder",   "verify"};
    return names;
}

struct GridConfig {
    int points_per_axis = 16;
    double side = 2.0 * std::numbers::pi;
    std::uint64_t budget = 2'000'000;
};

struct ModelConfig {
    std::string type = "torus";
    double radius = 1.0;
    double length = 10.0;
};

struct FieldConfig {
    std::string kind = "cosine";
    double amplitude = 0.2;
    int axis = 0;
    double value = 1.0;
};

struct Tolerances {
    std::optional<double> relative;
    std::optional<double> order;
    std::optional<double> identity;
};

struct OutputConfig {
    std::string dir = ".";
    std::string report = "report.json";
    std::string csv = "table.csv";
};

struct ExperimentConfig {
    std::string command;
    int dimension = 5;
    std::uint64_t seed = 7;
    GridConfig grid;
    ModelConfig model;
    FieldConfig field;
    /// ε, δ or l values, depending on the command.
    std::vector<double> sweep;
    double neck_delta = 0.6;
    std::optional<double> epsilon;
    double samples_per_unit = 64.0;
    Tolerances tolerances;
    OutputConfig output;
};

/// Schema violation or malformed input; maps to exit status 2.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, int line, const std::string& message)
        : std::runtime_error(message), field_(std::move(field)), line_(line) {}
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

/// Allowed keys per object path; mirrors schema/experiment_config.schema.json.
inline const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"", {"command", "dimension", "seed", "grid", "model", "field", "sweep", "connected_sum", "cylinder",
              "tolerances", "output"}},
        {"grid", {"points_per_axis", "side", "budget"}},
        {"model", {"type", "radius", "length"}},
        {"field", {"kind", "amplitude", "axis", "value"}},
        {"sweep", {"epsilon", "delta", "length"}},
        {"connected_sum", {"delta", "epsilon"}},
        {"cylinder", {"samples_per_unit"}},
        {"tolerances", {"relative", "order", "identity"}},
        {"output", {"dir", "report", "csv"}},
    };
    return keys;
}

namespace detail {

inline int line_of_offset(const std::string& text, std::size_t offset) {
    int line = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
        }
    }
    return line;
}

/// Line of the key at a dotted path, found by successive key searches.
/// Array suffixes such as "[2]" resolve to their key; a key that is absent
/// resolves to its nearest enclosing key, or to line 1.
inline int locate(const std::string& text, const std::string& path) {
    if (text.empty() || path.empty() || path.front() == '<') {
        return 0;
    }
    std::size_t pos = 0;
    std::size_t start = 0;
    while (start <= path.size()) {
        const std::size_t dot = path.find('.', start);
        std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        key = key.substr(0, key.find('['));
        const std::size_t hit = text.find("\"" + key + "\"", pos);
        if (hit == std::string::npos) {
            break;
        }
        pos = hit + key.size() + 2;
        if (dot == std::string::npos) {
            break;
        }
        start = dot + 1;
    }
    return line_of_offset(text, pos);
}

class Validator {
public:
    explicit Validator(const std::string& text) : text_(text) {}

    [[noreturn]] void fail(const std::string& path, const std::string& what) const {
        throw ConfigError(path, locate(text_, path), "field '" + path + "': " + what);
    }

    void object(const json& j, const std::string& path) const {
        if (!j.is_object()) {
            fail(path.empty() ? "<root>" : path, "must be an object");
        }
        const auto& allowed = known_keys().at(path);
        for (const auto& [key, value] : j.items()) {
            if (!allowed.contains(key)) {
                fail(join(path, key), "unknown key");
            }
        }
    }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    std::int64_t integer(const json& j, const std::string& path, std::int64_t min) const {
        if (!j.is_number_integer()) {
            fail(path, "must be an integer");
        }
        const auto v = j.get<std::int64_t>();
        if (v < min) {
            fail(path, "must be >= " + std::to_string(min));
        }
        return v;
    }

    double positive(const json& j, const std::string& path) const {
        if (!j.is_number()) {
            fail(path, "must be a number");
        }
        const double v = j.get<double>();
        if (!(v > 0.0)) {
            fail(path, "must be > 0");
        }
        return v;
    }

    double number(const json& j, const std::string& path) const {
        if (!j.is_number()) {
            fail(path, "must be a number");
        }
        return j.get<double>();
    }

    std::string one_of(const json& j, const std::string& path, const std::vector<std::string>& options) const {
        if (!j.is_string()) {
            fail(path, "must be a string");
        }
        const auto v = j.get<std::string>();
        for (const auto& o : options) {
            if (o == v) {
                return v;
            }
        }
        std::string list;
        for (const auto& o : options) {
            list += (list.empty() ? "" : ", ") + o;
        }
        fail(path, "must be one of {" + list + "}, got '" + v + "'");
    }

    std::string string(const json& j, const std::string& path) const {
        if (!j.is_string() || j.get<std::string>().empty()) {
            fail(path, "must be a non-empty string");
        }
        return j.get<std::string>();
    }

    std::vector<double> positive_list(const json& j, const std::string& path) const {
        if (!j.is_array()) {
            fail(path, "must be an array of positive numbers");
        }
        std::vector<double> out;
        for (std::size_t i = 0; i < j.size(); ++i) {
            out.push_back(positive(j[i], path + "[" + std::to_string(i) + "]"));
        }
        return out;
    }

private:
    const std::string& text_;
};

inline std::string sweep_key(const std::string& command) {
    if (command == "bubble-sweep") {
        return "epsilon";
    }
    if (command == "cutoff-sweep") {
        return "delta";
    }
    if (command == "cylinder") {
        return "length";
    }
    return "";
}

} // namespace detail

/// Default sweep for a command.
inline std::vector<double> default_sweep(const std::string& command) {
    if (command == "bubble-sweep") {
        return {0.4, 0.2, 0.1, 0.05};
    }
    if (command == "cutoff-sweep") {
        return {0.2, 0.1, 0.05};
    }
    if (command == "cylinder") {
        return {5.0, 10.0, 20.0, 40.0};
    }
    return {};
}

/// Validates a parsed document against the schema and fills a config.
/// text is the raw source, used only for line numbers in diagnostics.
inline ExperimentConfig config_from_json(const json& j, const std::string& text = "") {
    const detail::Validator v(text);
    v.object(j, "");
    ExperimentConfig c;
    if (!j.contains("command")) {
        v.fail("command", "is required");
    }
    c.command = v.one_of(j["command"], "command", command_names());
    if (j.contains("dimension")) {
        c.dimension = static_cast<int>(v.integer(j["dimension"], "dimension", 5));
    }
    if (j.contains("seed")) {
        c.seed = static_cast<std::uint64_t>(v.integer(j["seed"], "seed", 0));
    }
    if (j.contains("grid")) {
        const json& g = j["grid"];
        v.object(g, "grid");
        if (g.contains("points_per_axis")) {
            c.grid.points_per_axis = static_cast<int>(v.integer(g["points_per_axis"], "grid.points_per_axis", 8));
        }
        if (g.contains("side")) {
            c.grid.side = v.positive(g["side"], "grid.side");
        }
        if (g.contains("budget")) {
            c.grid.budget = static_cast<std::uint64_t>(v.integer(g["budget"], "grid.budget", 1));
        }
    }
    if (j.contains("model")) {
        const json& m = j["model"];
        v.object(m, "model");
        if (m.contains("type")) {
            c.model.type = v.one_of(m["type"], "model.type", {"sphere", "torus", "cylinder"});
        }
        if (m.contains("radius")) {
            c.model.radius = v.positive(m["radius"], "model.radius");
        }
        if (m.contains("length")) {
            c.model.length = v.positive(m["length"], "model.length");
        }
    }
    if (j.contains("field")) {
        const json& f = j["field"];
        v.object(f, "field");
        if (f.contains("kind")) {
            c.field.kind = v.one_of(f["kind"], "field.kind", {"constant", "cosine", "random"});
        }
        if (f.contains("amplitude")) {
            c.field.amplitude = v.number(f["amplitude"], "field.amplitude");
            if (!(std::abs(c.field.amplitude) < 1.0)) {
                v.fail("field.amplitude", "must lie in (-1, 1) so the field stays positive");
            }
        }
        if (f.contains("axis")) {
            c.field.axis = static_cast<int>(v.integer(f["axis"], "field.axis", 0));
        }
        if (f.contains("value")) {
            c.field.value = v.positive(f["value"], "field.value");
        }
    }
    c.sweep = default_sweep(c.command);
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        v.object(s, "sweep");
        const std::string expected = detail::sweep_key(c.command);
        for (const auto& [key, value] : s.items()) {
            if (key != expected) {
                v.fail("sweep." + key, expected.empty() ? "command '" + c.command + "' takes no sweep"
                                                        : "command '" + c.command + "' sweeps '" + expected + "'");
            }
            c.sweep = v.positive_list(value, "sweep." + key);
        }
    }
    if (j.contains("connected_sum")) {
        const json& s = j["connected_sum"];
        v.object(s, "connected_sum");
        if (s.contains("delta")) {
            c.neck_delta = v.positive(s["delta"], "connected_sum.delta");
        }
        if (s.contains("epsilon")) {
            c.epsilon = v.positive(s["epsilon"], "connected_sum.epsilon");
        }
    }
    if (j.contains("cylinder")) {
        const json& s = j["cylinder"];
        v.object(s, "cylinder");
        if (s.contains("samples_per_unit")) {
            c.samples_per_unit = v.positive(s["samples_per_unit"], "cylinder.samples_per_unit");
        }
    }
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        v.object(t, "tolerances");
        if (t.contains("relative")) {
            c.tolerances.relative = v.positive(t["relative"], "tolerances.relative");
        }
        if (t.contains("order")) {
            c.tolerances.order = v.number(t["order"], "tolerances.order");
        }
        if (t.contains("identity")) {
            c.tolerances.identity = v.positive(t["identity"], "tolerances.identity");
        }
    }
    if (j.contains("output")) {
        const json& o = j["output"];
        v.object(o, "output");
        if (o.contains("dir")) {
            c.output.dir = v.string(o["dir"], "output.dir");
        }
        if (o.contains("report")) {
            c.output.report = v.string(o["report"], "output.report");
        }
        if (o.contains("csv")) {
            c.output.csv = v.string(o["csv"], "output.csv");
        }
    }
    return c;
}

inline ExperimentConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<document>", detail::line_of_offset(text, e.byte > 0 ? e.byte - 1 : 0),
                          std::string("malformed JSON: ") + e.what());
    }
    return config_from_json(j, text);
}

/// Echo of the effective configuration, written into every report.
inline json to_json(const ExperimentConfig& c) {
    json j;
    j["command"] = c.command;
    j["dimension"] = c.dimension;
    j["seed"] = c.seed;
    j["grid"] = {{"points_per_axis", c.grid.points_per_axis}, {"side", c.grid.side}, {"budget", c.grid.budget}};
    j["model"] = {{"type", c.model.type}, {"radius", c.model.radius}, {"length", c.model.length}};
    j["field"] = {{"kind", c.field.kind}, {"amplitude", c.field.amplitude}, {"axis", c.field.axis},
                  {"value", c.field.value}};
    const std::string key = detail::sweep_key(c.command);
    j["sweep"] = json::object();
    if (!key.empty()) {
        j["sweep"][key] = c.sweep;
    }
    j["connected_sum"] = {{"delta", c.neck_delta}};
    if (c.epsilon) {
        j["connected_sum"]["epsilon"] = *c.epsilon;
    }
    j["cylinder"] = {{"samples_per_unit", c.samples_per_unit}};
    j["tolerances"] = json::object();
    if (c.tolerances.relative) {
        j["tolerances"]["relative"] = *c.tolerances.relative;
    }
    if (c.tolerances.order) {
        j["tolerances"]["order"] = *c.tolerances.order;
    }
    if (c.tolerances.identity) {
        j["tolerances"]["identity"] = *c.tolerances.identity;
    }
    j["output"] = {{"dir", c.output.dir}, {"report", c.output.report}, {"csv", c.output.csv}};
    return j;
}

} // namespace paneitz::cli
