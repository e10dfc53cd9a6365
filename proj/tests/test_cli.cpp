#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "rover/errors.hpp"
#include "rover/config_io.hpp"
#include "rover/plots.hpp"
#include "rover/report.hpp"
#include "rover/telemetry_io.hpp"

using namespace rover;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("roverfd_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(ROVERFD_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TelemetryLog small_log()
{
    TelemetryLog log;
    for (int i = 0; i < 3; ++i) {
        TelemetryRecord r;
        r.t = i * 0.01;
        r.plant_x = 0.1 * i + 1.0 / 3.0;
        r.r_psi = -0.0123456789012345 * i;
        r.h = 1.0 - 1e-17 * i;
        r.alarm_psi = i == 1;
        r.alarm_v = i == 2;
        log.records.push_back(r);
    }
    return log;
}

} // namespace

TEST_CASE("minimal config naming a builtin expands to the full scenario")
{
    const ScenarioConfig c = parse_config_text(R"({"builtin": "straight_B"})");
    CHECK(c == *find_builtin("straight_B"));
}

TEST_CASE("config round trip")
{
    for (const auto& c : builtin_scenarios()) {
        CHECK(parse_config_text(write_config(c)) == c);
    }
    ScenarioConfig c = *find_builtin("serpentine_C");
    c.faults.gyro_offset = GyroOffsetFault{0.123456789, 2.5};
    c.observer_mode = ObserverMode::SharedCommand;
    c.vitals.voltage_input = VoltageVitalInput::Level;
    c.noise.seed = 18446744073709551615ull;
    c.terrain = Terrain(InclineTerrain{0.05, 1.0});
    c.start = {1.5, -2.0, 0.3};
    CHECK(parse_config_text(write_config(c)) == c);

    GridTerrain g;
    g.ncols = 2;
    g.nrows = 3;
    g.origin_x = -1;
    g.cell_size = 0.5;
    g.heights = {0, 0.1, 0.2, 0.3, 0.4, 0.5};
    c.terrain = Terrain(g);
    CHECK(parse_config_text(write_config(c)) == c);
}

TEST_CASE("config with dt = 0 names dt")
{
    try {
        parse_config_text(R"({"builtin": "straight_A", "dt": 0})");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.key() == "dt");
    }
}

TEST_CASE("schema errors carry the key path")
{
    auto key_of = [](const std::string& text) {
        try {
            parse_config_text(text);
        } catch (const ConfigError& e) {
            return e.key();
        }
        return std::string("<no error>");
    };
    CHECK(key_of(R"({"builtin": "straight_A", "bogus": 1})") == "bogus");
    CHECK(key_of(R"({"builtin": "straight_A", "rover": {"motor": {"kt": 1}}})") == "rover.motor.kt");
    CHECK(key_of(R"({"builtin": "straight_A", "rover": {"mass": "heavy"}})") == "rover.mass");
    CHECK(key_of(R"({"builtin": "straight_A", "faults": [{"type": "gyro_offset", "offset_deg": 5, "x": 1}]})") ==
          "faults[0].x");
    CHECK(key_of(R"({"builtin": "straight_A", "faults": [{"type": "motor_failure", "wheel": 9}]})") ==
          "faults[0].wheel");
    CHECK(key_of(R"({"builtin": "straight_A", "mission": {"waypoints": []}})") == "mission.waypoints");
    CHECK(key_of(R"({"builtin": "nowhere"})") == "builtin");
    CHECK(key_of(R"({"name": "no waypoints"})") == "mission.waypoints");
    CHECK(key_of(R"({"builtin": "straight_A", "noise": {"seed": -3}})") == "noise.seed");
    CHECK(key_of(R"({"builtin": "straight_A", "observer_mode": "psychic"})") == "observer_mode");
}

TEST_CASE("syntax errors report the line")
{
    try {
        parse_config_text("{\n  \"dt\": 0.01,\n  oops\n}\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("overrides")
{
    const ScenarioConfig c = parse_config_text(R"({"builtin": "straight_B"})", {"faults[0].offset_deg=5"});
    REQUIRE(c.faults.gyro_offset);
    CHECK(c.faults.gyro_offset->offset == deg_to_rad(5.0));

    const ScenarioConfig d =
        parse_config_text(R"({"builtin": "straight_A"})",
                          {"noise.seed=17", "thresholds.heading.c=0.05", "observer_mode=shared_command",
                           "faults[0]={\"type\":\"motor_failure\",\"wheel\":4,\"t_inject\":3}"});
    CHECK(d.noise.seed == 17u);
    CHECK(d.thresholds.heading.c == 0.05);
    CHECK(d.observer_mode == ObserverMode::SharedCommand);
    REQUIRE(d.faults.motor_failure);
    CHECK(d.faults.motor_failure->wheel_index == 4);

    CHECK_THROWS_AS(parse_config_text(R"({"builtin": "straight_A"})", {"dt"}), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"builtin": "straight_A"})", {"faults[3].offset_deg=1"}), ConfigError);
    CHECK_THROWS_AS(parse_config_text(R"({"builtin": "straight_A"})", {"dt=0"}), ConfigError);
}

TEST_CASE("parse_config reads files and resolves grid paths")
{
    const fs::path dir = scratch("cfg");
    fs::create_directories(dir);
    {
        std::ofstream(dir / "g.asc") << "ncols 2\nnrows 2\nxllcorner 0\nyllcorner 0\ncellsize 1\n0 1\n0 1\n";
        std::ofstream(dir / "c.json") << R"({"builtin": "straight_A", "terrain": {"type": "grid", "path": "g.asc"}})";
    }
    const ScenarioConfig c = parse_config(dir / "c.json");
    CHECK(c.terrain.height(1.5, 0.5) == doctest::Approx(1.0));
    CHECK(parse_config_text(write_config(c)) == c);
    CHECK_THROWS_AS(parse_config(dir / "missing.json"), ConfigError);
    fs::remove_all(dir);
}

TEST_CASE("config hash is stable and sensitive")
{
    const auto a = *find_builtin("straight_A");
    CHECK(config_hash(a) == config_hash(a));
    CHECK(config_hash(a).size() == 16);
    auto b = a;
    b.noise.seed = 1;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(fnv1a64("") == 14695981039346656037ull);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
}

TEST_CASE("CSV export")
{
    const fs::path dir = scratch("csv");
    fs::create_directories(dir);
    const TelemetryLog log = small_log();
    export_csv(log, dir / "a.csv");
    export_csv(log, dir / "b.csv");
    const std::string text = slurp(dir / "a.csv");
    CHECK(text == slurp(dir / "b.csv"));

    std::istringstream in(text);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] ==
          "t,plant_x,plant_y,plant_psi,plant_u,obs_x,obs_y,obs_psi,obs_u,psi_meas,speed_meas,accel_x,v_left,v_right,"
          "vital_ax,vital_ddot,vital_psidot,vital_vdot,p,h_raw,h,r_psi,r_v,thr_psi_adaptive,thr_v_adaptive,"
          "thr_psi_static,thr_v_static,alarm_psi,alarm_v");
    for (const auto& l : lines) CHECK(std::count(l.begin(), l.end(), ',') == 28);
    CHECK(lines[1].substr(lines[1].size() - 4) == ",0,0");
    CHECK(lines[2].substr(lines[2].size() - 4) == ",1,0");
    CHECK(lines[3].substr(lines[3].size() - 4) == ",0,1");

    // shortest round-trip reals read back exactly
    std::istringstream back(text);
    CHECK(read_csv(back) == log.records);
    CHECK_THROWS_AS(export_csv(log, dir / "no" / "such" / "dir.csv"), std::runtime_error);
    fs::remove_all(dir);
}

TEST_CASE("CSV reader rejects malformed rows")
{
    std::string header;
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) header += (i ? "," : "") + std::string(kCsvColumns[i]);
    std::istringstream short_row(header + "\n1,2,3\n");
    CHECK_THROWS_AS(read_csv(short_row), ParseError);
    std::istringstream bad_header("a,b\n");
    CHECK_THROWS_AS(read_csv(bad_header), ParseError);
}

TEST_CASE("plots are written into a freshly created directory")
{
    const fs::path dir = scratch("plots") / "nested";
    const auto r = run_scenario(*find_builtin("straight_B"));
    const PlotFiles files = emit_plots(r.log.records, {{20, 0}}, "straight_B", dir);
    for (const auto& p : {files.path, files.health, files.residual_heading, files.residual_velocity}) {
        REQUIRE(fs::exists(p));
        const std::string svg = slurp(p);
        CHECK(svg.rfind("<svg", 0) == 0);
        CHECK(svg.find("</svg>") != std::string::npos);
    }
    const std::string heading = slurp(files.residual_heading);
    CHECK(heading.find("time [s]") != std::string::npos);
    CHECK(heading.find("adaptive") != std::string::npos);
    CHECK(heading.find("static") != std::string::npos);
    CHECK(heading.find("class=\"alarm\"") != std::string::npos);
    CHECK(slurp(files.path).find("x [m]") != std::string::npos);
    CHECK_THROWS(emit_plots({}, {}, "empty", dir));
    fs::remove_all(scratch("plots"));
}

TEST_CASE("report over the six builtin runs")
{
    std::vector<RunSummary> summaries;
    for (const auto& c : builtin_scenarios()) {
        RunSummary s = run_scenario(c).summary;
        s.config_hash = config_hash(c);
        summaries.push_back(summary_from_json(summary_to_json(s)));
    }
    const auto j = nlohmann::json::parse(make_report(summaries));
    CHECK(j["runs"].size() == 6);
    REQUIRE(j["comparison"].size() == 2);
    for (const auto& row : j["comparison"]) {
        CHECK(row["cases"].contains("A"));
        CHECK(row["cases"].contains("B"));
        CHECK(row["cases"].contains("C"));
        CHECK(row["cases"]["A"]["adaptive_detections"] == 0);
    }
    for (const auto& run : j["runs"]) {
        CHECK(run["config_hash"].get<std::string>().size() == 16);
        if (run["name"].get<std::string>().back() == 'A') {
            for (const auto& d : run["detections"]) CHECK(d["detector"] == "static");
        }
    }
    CHECK_THROWS(make_report({}));
}

TEST_CASE("summary JSON round trip")
{
    RunSummary s = run_scenario(*find_builtin("straight_C")).summary;
    s.config_hash = "0123456789abcdef";
    const RunSummary t = summary_from_json(summary_to_json(s));
    CHECK(t.name == s.name);
    CHECK(t.detections.size() == s.detections.size());
    CHECK(t.heading_latency == s.heading_latency);
    CHECK(t.min_health == s.min_health);
    CHECK(t.collection_deltas == s.collection_deltas);
    CHECK(summary_to_json(t) == summary_to_json(s));
}

TEST_CASE("roverfd exit codes and outputs")
{
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    std::ofstream(dir / "ok.json") << R"({"builtin": "straight_A"})";
    std::ofstream(dir / "bad.json") << R"({"builtin": "straight_A", "dt": 0})";
    std::ofstream(dir / "syntax.json") << "{\n\"dt\": \n";
    std::ofstream(dir / "unstable.json") << R"({"builtin": "straight_A", "rover": {"yaw_inertia": 1e-300}})";

    CHECK(run_cli("list") == 0);
    CHECK(run_cli("") == 1);
    CHECK(run_cli("frobnicate") == 1);
    CHECK(run_cli("run") == 1);
    CHECK(run_cli("run --config " + (dir / "missing.json").string()) == 1);
    CHECK(run_cli("run --config " + (dir / "bad.json").string() + " --out " + (dir / "o").string()) == 1);
    CHECK(run_cli("run --config " + (dir / "syntax.json").string() + " --out " + (dir / "o").string()) == 1);
    CHECK(run_cli("run --config " + (dir / "ok.json").string() + " --out " + (dir / "o").string() +
                  " --seed 4 --set thresholds.debounce=5 --no-plots") == 0);
    const ScenarioConfig written = parse_config(dir / "o" / "straight_A" / "config.json");
    CHECK(written.noise.seed == 4u);
    CHECK(written.thresholds.debounce == 5);
    CHECK(fs::exists(dir / "o" / "straight_A" / "telemetry.csv"));
    CHECK(fs::exists(dir / "o" / "straight_A" / "summary.json"));

    CHECK(run_cli("report --in " + (dir / "o").string()) == 0);
    CHECK(fs::exists(dir / "o" / "report.json"));
    CHECK(run_cli("plot --in " + (dir / "o" / "straight_A" / "telemetry.csv").string() + " --out " +
                  (dir / "p").string()) == 0);
    CHECK(fs::exists(dir / "p" / "residual_velocity.svg"));

    CHECK(run_cli("run --config " + (dir / "unstable.json").string() + " --out " + (dir / "u").string() +
                  " --no-plots") == 2);
    CHECK(fs::exists(dir / "u" / "straight_A" / "telemetry.csv"));

    const std::string env_cmd = "ROVER_OUT_DIR=" + (dir / "env").string() + " " + ROVERFD_PATH +
                                " run --no-plots --config " + (dir / "ok.json").string() + " > /dev/null 2>&1";
    CHECK(std::system(env_cmd.c_str()) == 0);
    CHECK(fs::exists(dir / "env" / "straight_A" / "telemetry.csv"));
    fs::remove_all(dir);
}
