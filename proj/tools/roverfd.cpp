// roverfd: run rover fault-detection scenarios and export telemetry, plots and reports.
// Exit codes: 0 success, 1 usage or config error, 2 simulation abort.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rover/batch.hpp"
#include "rover/config_io.hpp"
#include "rover/errors.hpp"
#include "rover/plots.hpp"
#include "rover/report.hpp"
#include "rover/telemetry_io.hpp"

namespace fs = std::filesystem;
using namespace rover;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitAbort = 2;

std::string default_out_dir()
{
    const char* env = std::getenv("ROVER_OUT_DIR");
    return env && *env ? env : "out";
}

void write_text(const fs::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

// <out>/<name>/{config.json, telemetry.csv, summary.json, *.svg}
RunSummary write_run(const ScenarioConfig& cfg, const ScenarioResult& res, const fs::path& out, bool plots)
{
    const fs::path dir = out / cfg.name;
    fs::create_directories(dir);
    RunSummary s = res.summary;
    s.config_hash = config_hash(cfg);
    write_text(dir / "config.json", write_config(cfg));
    export_csv(res.log, dir / "telemetry.csv");
    write_text(dir / "summary.json", summary_to_json(s));
    if (plots && !res.log.records.empty()) {
        emit_plots(res.log.records, cfg.mission.waypoints, cfg.name, dir);
    }
    return s;
}

void print_summary(const RunSummary& s)
{
    auto show = [](const std::optional<double>& v) {
        char buf[32] = "-";
        if (v) std::snprintf(buf, sizeof buf, "%.2f s", *v);
        return std::string(buf);
    };
    std::printf("%-16s detections=%-4zu heading_latency=%-8s velocity_latency=%-8s min_health=%.3f "
                "final_health=%.3f waypoints=%zu/%zu%s\n",
                s.name.c_str(), s.detections.size(), show(s.heading_latency).c_str(),
                show(s.velocity_latency).c_str(), s.min_health, s.final_health, s.plant_collection_times.size(),
                s.waypoint_count, s.aborted ? " ABORTED" : "");
}

int cmd_run(const std::string& config, const std::string& out, const std::optional<std::uint64_t>& seed,
            std::vector<std::string> overrides, bool plots)
{
    if (seed) overrides.push_back("noise.seed=" + std::to_string(*seed));
    const ScenarioConfig cfg = parse_config(config, overrides);
    const ScenarioResult res = run_scenario(cfg);
    const RunSummary s = write_run(cfg, res, out, plots);
    print_summary(s);
    if (res.log.aborted) {
        std::fprintf(stderr, "simulation aborted: %s\n", res.log.abort_reason.c_str());
        return kExitAbort;
    }
    return kExitOk;
}

int cmd_batch(const std::string& out, bool serial, bool plots)
{
    const auto configs = builtin_scenarios();
    const auto results = run_batch(configs, serial ? Execution::Serial : Execution::Parallel);
    std::vector<RunSummary> summaries;
    bool aborted = false;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        summaries.push_back(write_run(configs[i], results[i], out, plots));
        print_summary(summaries.back());
        aborted = aborted || results[i].log.aborted;
    }
    write_text(fs::path(out) / "report.json", make_report(summaries));
    return aborted ? kExitAbort : kExitOk;
}

int cmd_list()
{
    for (const auto& c : builtin_scenarios()) {
        char faults[96] = "none";
        if (c.faults.gyro_offset) {
            std::snprintf(faults, sizeof faults, "gyro offset %g deg at t=%g s", rad_to_deg(c.faults.gyro_offset->offset),
                          c.faults.gyro_offset->t_inject);
        } else if (c.faults.motor_failure) {
            std::snprintf(faults, sizeof faults, "motor failure, wheel %d at t=%g s", c.faults.motor_failure->wheel_index,
                          c.faults.motor_failure->t_inject);
        }
        std::printf("%-14s %zu waypoint(s), faults: %s\n", c.name.c_str(), c.mission.waypoints.size(), faults);
    }
    return kExitOk;
}

int cmd_report(const std::string& in)
{
    const auto summaries = collect_summaries(in);
    if (summaries.empty()) {
        std::fprintf(stderr, "no summary.json found under %s\n", in.c_str());
        return kExitUsage;
    }
    for (const auto& s : summaries) print_summary(s);
    const fs::path out = fs::path(in) / "report.json";
    write_text(out, make_report(summaries));
    std::printf("wrote %s\n", out.string().c_str());
    return kExitOk;
}

int cmd_plot(const std::string& in, const std::string& out)
{
    const auto records = load_csv(in);
    if (records.empty()) {
        std::fprintf(stderr, "%s has no telemetry rows\n", in.c_str());
        return kExitUsage;
    }
    // a config written next to the telemetry supplies waypoints and the title
    std::vector<Waypoint> waypoints;
    std::string title = fs::path(in).stem().string();
    const fs::path sibling = fs::path(in).parent_path() / "config.json";
    if (fs::exists(sibling)) {
        try {
            const ScenarioConfig cfg = parse_config(sibling);
            waypoints = cfg.mission.waypoints;
            title = cfg.name;
        } catch (const std::exception&) {
            // plot without waypoints
        }
    }
    const PlotFiles files = emit_plots(records, waypoints, title, out);
    for (const auto& p : {files.path, files.health, files.residual_heading, files.residual_velocity}) {
        std::printf("wrote %s\n", p.string().c_str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Rover health monitoring and fault detection simulator"};
    app.require_subcommand(1);

    std::string config, out = default_out_dir(), in;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> overrides;
    bool all_builtin = false, serial = false, no_plots = false;

    auto* run = app.add_subcommand("run", "Run one scenario from a JSON config");
    run->add_option("--config", config, "Scenario config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out, "Output directory (default $ROVER_OUT_DIR or ./out)");
    run->add_option("--seed", seed, "Noise seed override");
    run->add_option("--set", overrides, "Override a config value, e.g. faults[0].offset_deg=5");
    run->add_flag("--no-plots", no_plots, "Skip SVG output");

    auto* batch = app.add_subcommand("batch", "Run the builtin scenarios");
    batch->add_flag("--all-builtin", all_builtin, "Run all six builtin scenarios")->required();
    batch->add_option("--out", out, "Output directory (default $ROVER_OUT_DIR or ./out)");
    batch->add_flag("--serial", serial, "Use the serial reference runner");
    batch->add_flag("--no-plots", no_plots, "Skip SVG output");

    app.add_subcommand("list", "List builtin scenarios");

    auto* report = app.add_subcommand("report", "Build report.json from run summaries");
    report->add_option("--in", in, "Directory holding run outputs")->required();

    auto* plot = app.add_subcommand("plot", "Render SVG plots from a telemetry CSV");
    plot->add_option("--in", in, "Telemetry CSV")->required()->check(CLI::ExistingFile);
    plot->add_option("--out", out, "Directory for the SVG files")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run) return cmd_run(config, out, seed, overrides, !no_plots);
        if (*batch) return cmd_batch(out, serial, !no_plots);
        if (app.got_subcommand("list")) return cmd_list();
        if (*report) return cmd_report(in);
        if (*plot) return cmd_plot(in, out);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitUsage;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "parse error: %s\n", e.what());
        return kExitUsage;
    } catch (const SimulationError& e) {
        std::fprintf(stderr, "simulation error: %s\n", e.what());
        return kExitAbort;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
