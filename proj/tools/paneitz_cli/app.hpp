#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paneitz/errors.hpp"
#include "paneitz_cli/config.hpp"
#include "paneitz_cli/experiments.hpp"
#include "paneitz_cli/format.hpp"

namespace paneitz::cli {

inline constexpr const char* tool_name = "paneitz";
inline constexpr const char* tool_version = "1.0.0";

enum ExitCode { exit_pass = 0, exit_certificate_failure = 1, exit_config_error = 2 };

inline void write_csv(const std::filesystem::path& path, const Table& t) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + path.string());
    }
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        f << (i ? "," : "") << t.header[i];
    }
    f << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            f << (i ? "," : "") << format_double(row[i]);
        }
        f << '\n';
    }
    if (!f) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

/// Report body without the timing block.
inline json report_body(const ExperimentConfig& c, const Outcome& o) {
    json certs = json::array();
    for (const Certificate& k : o.certificates) {
        certs.push_back(to_json(k));
    }
    return {{"tool", {{"name", tool_name}, {"version", tool_version}}},
            {"config", to_json(c)},
            {"results", o.results},
            {"certificates", certs},
            {"passed", o.passed()}};
}

/// Hash of the body with the output paths removed: where a report is
/// written does not change what it says.
inline std::string report_hash(json body) {
    body["config"].erase("output");
    return determinism_hash(body);
}

inline json make_report(const ExperimentConfig& c, const Outcome& o, double seconds) {
    json r = report_body(c, o);
    r["determinism_hash"] = report_hash(r);
    json timing = o.timing;
    timing["total_seconds"] = seconds;
    r["timing"] = timing;
    return r;
}

struct CliOptions {
    std::string config_path;
    std::optional<int> dimension;
    std::optional<int> grid_points;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    std::optional<std::string> model;
};

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw ConfigError("--config", 0, "cannot read config file '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Applies command-line overrides on top of the file (or default) config.
inline void apply_overrides(ExperimentConfig& c, const CliOptions& o) {
    if (o.dimension) {
        if (*o.dimension < 5) {
            throw ConfigError("--dimension", 0, "field '--dimension': must be >= 5");
        }
        c.dimension = *o.dimension;
    }
    if (o.grid_points) {
        if (c.command == "verify") {
            throw ConfigError("--grid-points", 0, "verify uses fixed acceptance grids; --grid-points is not accepted");
        }
        if (*o.grid_points < 8) {
            throw ConfigError("--grid-points", 0, "field '--grid-points': must be >= 8");
        }
        c.grid.points_per_axis = *o.grid_points;
    }
    if (o.out_dir) {
        c.output.dir = *o.out_dir;
    }
    if (o.seed) {
        c.seed = *o.seed;
    }
    if (o.model) {
        c.model.type = *o.model;
    }
    if (o.tolerance) {
        if (!(*o.tolerance > 0.0)) {
            throw ConfigError("--tolerance", 0, "field '--tolerance': must be > 0");
        }
        if (c.command == "bubble-sweep") {
            c.tolerances.relative = *o.tolerance;
        } else if (c.command == "cutoff-sweep") {
            c.tolerances.order = *o.tolerance;
        } else if (c.command == "cylinder") {
            c.tolerances.identity = *o.tolerance;
        } else {
            throw ConfigError("--tolerance", 0, "command '" + c.command + "' takes no --tolerance");
        }
    }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Numerical experiments for the Paneitz functional and Q-curvature", tool_name};
    app.set_version_flag("--version", tool_version);
    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON experiment config")->check(CLI::ExistingFile);
    app.add_option("--dimension,--n", opt.dimension, "manifold dimension (>= 5)");
    app.add_option("--grid-points", opt.grid_points, "grid points per axis");
    app.add_option("--out", opt.out_dir, "output directory for report.json and the CSV table");
    app.add_option("--seed", opt.seed, "seed for randomized suites (default 7)");
    app.add_option("--tolerance", opt.tolerance, "primary tolerance of the command");
    app.add_option("--model", opt.model, "metric model")->check(CLI::IsMember({"sphere", "torus", "cylinder"}));
    for (const std::string& name : command_names()) {
        app.add_subcommand(name, "run the " + name + " experiment")->fallthrough();
    }
    app.require_subcommand(0, 1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_pass : exit_config_error;
    }

    std::string command;
    for (const CLI::App* sub : app.get_subcommands()) {
        command = sub->get_name();
    }

    ExperimentConfig config;
    try {
        if (!opt.config_path.empty()) {
            config = parse_config(read_file(opt.config_path));
            if (!command.empty() && command != config.command) {
                throw ConfigError("command", 0,
                                  "subcommand '" + command + "' does not match config command '" + config.command + "'");
            }
        } else {
            if (command.empty()) {
                throw ConfigError("command", 0, "no command given; pass a subcommand or --config");
            }
            config.command = command;
            config.sweep = default_sweep(command);
        }
        apply_overrides(config, opt);
    } catch (const ConfigError& e) {
        err << "config error: " << (opt.config_path.empty() ? std::string("<command line>") : opt.config_path);
        if (e.line() > 0) {
            err << ":" << e.line();
        }
        err << ": " << e.what() << '\n';
        return exit_config_error;
    }

    out << tool_name << " " << config.command << " n=" << config.dimension << " seed=" << config.seed << '\n';
    const auto t0 = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = run_experiment(config, [&out](const Criterion& k) { out << summary_line(k) << std::endl; });
    } catch (const paneitz::Error& e) {
        err << "invalid input: " << e.what() << '\n';
        return exit_config_error;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const json report = make_report(config, outcome, seconds);

    for (const std::string& line : outcome.lines) {
        out << line << '\n';
    }
    for (const Certificate& k : outcome.certificates) {
        if (config.command == "verify") {
            break; // already streamed one line per criterion
        }
        out << (k.passed ? "PASS " : "FAIL ") << k.name << ": " << k.inequality << " (margin "
            << format_double(k.margin) << ")\n";
    }

    const std::filesystem::path dir(config.output.dir);
    const std::filesystem::path report_path = dir / config.output.report;
    const std::filesystem::path csv_path = dir / config.output.csv;
    try {
        std::filesystem::create_directories(dir);
        std::ofstream f(report_path, std::ios::binary);
        if (!f) {
            throw std::runtime_error("cannot write " + report_path.string());
        }
        f << report.dump(2) << '\n';
        if (!f) {
            throw std::runtime_error("write failed for " + report_path.string());
        }
        write_csv(csv_path, outcome.table);
    } catch (const std::exception& e) {
        err << "output error: " << e.what() << '\n';
        return exit_config_error;
    }
    out << "report: " << report_path.string() << '\n';
    out << "csv: " << csv_path.string() << '\n';
    out << "determinism_hash: " << report["determinism_hash"].get<std::string>() << '\n';
    out << "result: " << (outcome.passed() ? "PASS" : "FAIL") << '\n';
    return outcome.passed() ? exit_pass : exit_certificate_failure;
}

} // namespace paneitz::cli
