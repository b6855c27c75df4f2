#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "paneitz_cli/app.hpp"

using namespace paneitz::cli;
namespace fs = std::filesystem;

namespace {

struct CliRun {
    int code;
    std::string out;
    std::string err;
};

CliRun run(std::vector<std::string> args) {
    args.insert(args.begin(), "paneitz");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "paneitz_cli_test" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream f(p);
    std::string line;
    std::getline(f, line);
    return line;
}

std::size_t line_count(const fs::path& p) {
    std::ifstream f(p);
    std::size_t n = 0;
    for (std::string line; std::getline(f, line);) {
        ++n;
    }
    return n;
}

} // namespace

TEST(Format, ShortestRoundTrip) {
    EXPECT_EQ(format_double(20.0), "20");
    EXPECT_EQ(format_double(0.1), "0.1");
    EXPECT_EQ(format_double(105.0 / 16.0), "6.5625");
    const double third = 1.0 / 3.0;
    EXPECT_EQ(std::stod(format_double(third)), third);
}

TEST(Format, Fnv1aVectors) {
    EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
    EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
    EXPECT_EQ(hex64(fnv1a64("foobar")), "85944171f73967e8");
}

TEST(Cli, CurvatureSphere) {
    const fs::path dir = scratch("curvature");
    const CliRun r = run({"curvature", "--model", "sphere", "--n", "5", "--out", dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("R=20\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("Ric eigenvalue=4\n"), std::string::npos);
    EXPECT_NE(r.out.find("Q=6.5625\n"), std::string::npos);
    EXPECT_NE(r.out.find("seed=7"), std::string::npos);
    const json report = json::parse(slurp(dir / "report.json"));
    EXPECT_EQ(report["results"]["R"], 20.0);
    EXPECT_EQ(report["tool"]["name"], "paneitz");
    EXPECT_TRUE(report["passed"].get<bool>());
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}).code, 0); }

TEST(Cli, MissingCommand) {
    const CliRun r = run({});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("no command"), std::string::npos);
}

TEST(Cli, BadFlags) {
    EXPECT_EQ(run({"curvature", "--n", "4"}).code, 2);
    EXPECT_EQ(run({"curvature", "--model", "hyperbolic"}).code, 2);
    EXPECT_EQ(run({"curvature", "--bogus"}).code, 2);
    EXPECT_EQ(run({"cutoff-sweep", "--grid-points", "4"}).code, 2);
    EXPECT_EQ(run({"verify", "--dimension", "6"}).code, 2);
    EXPECT_EQ(run({"verify", "--tolerance", "0.5"}).code, 2);
    EXPECT_EQ(run({"verify", "--grid-points", "12"}).code, 2);
    EXPECT_EQ(run({"curvature", "--config", "/nonexistent/config.json"}).code, 2);
}

TEST(Cli, MalformedJsonExitsTwo) {
    const CliRun r = run({"--config", PANEITZ_TEST_DATA "/malformed.json"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("malformed.json:5"), std::string::npos) << r.err;
}

TEST(Cli, MalformedJsonExitsTwoEndToEnd) {
    const std::string cmd = std::string("\"") + PANEITZ_CLI_PATH + "\" --config " + PANEITZ_TEST_DATA +
                            "/malformed.json > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    ASSERT_TRUE(WIFEXITED(status));
    EXPECT_EQ(WEXITSTATUS(status), 2);
}

TEST(Cli, UnknownKeyReportsFieldAndLine) {
    const fs::path dir = scratch("unknown");
    const fs::path cfg =
        write(dir, "c.json", "{\n  \"command\": \"cylinder\",\n  \"grid\": {\n    \"point_per_axis\": 12\n  }\n}\n");
    const CliRun r = run({"--config", cfg.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("c.json:4"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("grid.point_per_axis"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("unknown key"), std::string::npos) << r.err;
}

TEST(Config, Diagnostics) {
    auto field_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return e.field() + "@" + std::to_string(e.line());
        }
        return std::string("accepted");
    };
    EXPECT_EQ(field_of(R"({"dimension": 5})"), "command@1");
    EXPECT_EQ(field_of("{\"command\": \"verify\",\n\"dimension\": 4}"), "dimension@2");
    EXPECT_EQ(field_of("{\"command\": \"verify\",\n\"dimension\": 5.5}"), "dimension@2");
    EXPECT_EQ(field_of(R"({"command": "flow"})"), "command@1");
    EXPECT_EQ(field_of("{\"command\": \"cylinder\",\n \"sweep\": {\"delta\": [0.1]}}"), "sweep.delta@2");
    EXPECT_EQ(field_of("{\"command\": \"bubble-sweep\",\n \"sweep\": {\"epsilon\": [0.1, -2]}}"), "sweep.epsilon[1]@2");
    EXPECT_EQ(field_of("{\"command\": \"functional\",\n\n \"field\": {\"amplitude\": 1.5}}"), "field.amplitude@3");
    EXPECT_EQ(field_of(R"({"command": "functional", "output": {"dir": ""}})"), "output.dir@1");
    EXPECT_EQ(field_of("[1, 2]"), "<root>@0");
    EXPECT_EQ(field_of("{\"command\": \"verify\",\n\"seed\": 3}"), "accepted");
}

TEST(Config, DefaultsAndEcho) {
    const ExperimentConfig c = parse_config(R"({"command": "bubble-sweep"})");
    EXPECT_EQ(c.dimension, 5);
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.sweep, (std::vector<double>{0.4, 0.2, 0.1, 0.05}));
    const ExperimentConfig back = config_from_json(to_json(c));
    EXPECT_EQ(to_json(back), to_json(c));
}

TEST(Config, SchemaMatchesValidator) {
    const json schema = json::parse(slurp(PANEITZ_SOURCE_DIR "/schema/experiment_config.schema.json"));
    EXPECT_FALSE(schema["additionalProperties"].get<bool>());
    std::set<std::string> top;
    for (const auto& [key, value] : schema["properties"].items()) {
        top.insert(key);
        if (value.contains("properties")) {
            EXPECT_FALSE(value["additionalProperties"].get<bool>()) << key;
            std::set<std::string> nested;
            for (const auto& [k, v] : value["properties"].items()) {
                nested.insert(k);
            }
            ASSERT_TRUE(known_keys().contains(key)) << key;
            EXPECT_EQ(nested, known_keys().at(key)) << key;
        }
    }
    EXPECT_EQ(top, known_keys().at(""));
    std::set<std::string> commands;
    for (const auto& c : schema["properties"]["command"]["enum"]) {
        commands.insert(c.get<std::string>());
    }
    EXPECT_EQ(commands, std::set<std::string>(command_names().begin(), command_names().end()));
}

TEST(Cli, ShippedConfigsValidate) {
    for (const auto& entry : fs::directory_iterator(PANEITZ_SOURCE_DIR "/configs")) {
        EXPECT_NO_THROW(parse_config(slurp(entry.path()))) << entry.path();
    }
}

TEST(Cli, BubbleSweepCsv) {
    const fs::path dir = scratch("bubble");
    const CliRun r = run({"bubble-sweep", "--out", dir.string(), "--tolerance", "0.2"});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(first_line(dir / "table.csv"), "epsilon,numerator,mass,quotient,oracle,rel_err");
    EXPECT_EQ(line_count(dir / "table.csv"), 5u);
}

TEST(Cli, CutoffSweepCsvAndCertificateFailure) {
    const fs::path dir = scratch("cutoff");
    CliRun r = run({"cutoff-sweep", "--grid-points", "8", "--out", dir.string()});
    EXPECT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(first_line(dir / "table.csv"), "delta,quotient,delta_quotient,fitted_order");
    EXPECT_EQ(line_count(dir / "table.csv"), 4u);
    // an order no cutoff family reaches
    r = run({"cutoff-sweep", "--grid-points", "8", "--out", dir.string(), "--tolerance", "5"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("FAIL cutoff order"), std::string::npos);
    const json report = json::parse(slurp(dir / "report.json"));
    EXPECT_FALSE(report["passed"].get<bool>());
}

TEST(Cli, EmptySweepWritesHeaderOnly) {
    const fs::path dir = scratch("empty");
    const fs::path cfg = write(dir, "c.json",
                               R"({"command": "bubble-sweep", "sweep": {"epsilon": []}, "output": {"dir": ")" +
                                   dir.string() + R"("}})");
    const CliRun r = run({"--config", cfg.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(dir / "table.csv"), "epsilon,numerator,mass,quotient,oracle,rel_err\n");
}

TEST(Cli, SubcommandMustMatchConfig) {
    const fs::path dir = scratch("mismatch");
    const fs::path cfg = write(dir, "c.json", R"({"command": "cylinder"})");
    EXPECT_EQ(run({"curvature", "--config", cfg.string(), "--out", dir.string()}).code, 2);
    EXPECT_EQ(run({"cylinder", "--config", cfg.string(), "--out", dir.string()}).code, 0);
}

TEST(Cli, ReportsDeterministicModuloTiming) {
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    const fs::path cfg =
        write(a, "c.json", R"({"command": "functional", "grid": {"points_per_axis": 8}, "field": {"kind": "random"}})");
    ASSERT_EQ(run({"--config", cfg.string(), "--seed", "99", "--out", a.string()}).code, 0);
    ASSERT_EQ(run({"--config", cfg.string(), "--seed", "99", "--out", b.string()}).code, 0);
    json ra = json::parse(slurp(a / "report.json"));
    json rb = json::parse(slurp(b / "report.json"));
    EXPECT_EQ(ra["determinism_hash"], rb["determinism_hash"]);
    ASSERT_TRUE(ra.contains("timing"));
    for (json* r : {&ra, &rb}) {
        r->erase("timing");
        (*r)["config"]["output"].erase("dir");
    }
    EXPECT_EQ(ra.dump(), rb.dump());

    ASSERT_EQ(run({"--config", cfg.string(), "--seed", "100", "--out", b.string()}).code, 0);
    const json rc = json::parse(slurp(b / "report.json"));
    EXPECT_NE(rc["results"]["quotient"], ra["results"]["quotient"]);
    EXPECT_NE(rc["determinism_hash"], ra["determinism_hash"]);
}

TEST(Cli, HashExcludesTiming) {
    ExperimentConfig c;
    c.command = "curvature";
    Outcome o = run_experiment(c);
    const json r1 = make_report(c, o, 1.0);
    o.timing["extra_seconds"] = 42.0;
    const json r2 = make_report(c, o, 2.0);
    EXPECT_EQ(r1["determinism_hash"], r2["determinism_hash"]);
    EXPECT_NE(r1["timing"], r2["timing"]);
    EXPECT_EQ(r1["determinism_hash"], report_hash(report_body(c, o)));
}
