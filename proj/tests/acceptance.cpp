// Acceptance suite: one PASS/FAIL line per criterion, exit status = number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "rover/errors.hpp"
#include "rover/batch.hpp"
#include "rover/config_io.hpp"
#include "rover/fdi.hpp"
#include "rover/monitor.hpp"
#include "rover/scenario.hpp"
#include "rover/sim_core.hpp"

using namespace rover;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Verdict()>& check)
{
    Verdict v{false, {}};
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %2d %-34s %s\n", v.pass ? "PASS" : "FAIL", id, title, v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ScenarioConfig builtin(const std::string& name) { return find_builtin(name).value(); }

std::size_t adaptive_events(const RunSummary& s)
{
    return static_cast<std::size_t>(std::count_if(s.detections.begin(), s.detections.end(), [](const auto& e) {
        return e.detector == DetectorKind::Adaptive;
    }));
}

// independent closed forms
double gaussian_vital(double x, double sigma)
{
    return 1.0 - std::exp(-x * x / (2 * sigma * sigma)) / (sigma * std::sqrt(2 * M_PI));
}
double logistic_vital(double d) { return 1.0 / (1.0 + std::exp(-20.0 * (d - 0.1))); }
double binary_health(double p)
{
    auto term = [](double q) { return q <= 0 ? 0.0 : -q * std::log2(q); };
    return 1.0 - term(p) - term(1.0 - p);
}

Verdict vital_oracles()
{
    struct Case {
        double got, want, tol;
    };
    const Case cases[] = {
        {vital_gaussian(0, 0.4), 0.0026443, 1e-6},
        {vital_gaussian(2, 0.4), 0.9999963, 1e-6},
        {vital_dist_rate(0.1, 20, 0.1), 0.5, 1e-12},
        {vital_dist_rate(-0.25, 20, 0.1), 9.11e-4, 1e-6},
        {vital_dist_rate(0, 20, 0.1), 0.11920, 1e-5},
        {vital_gaussian(0, 0.4), gaussian_vital(0, 0.4), 1e-12},
        {vital_gaussian(2, 0.4), gaussian_vital(2, 0.4), 1e-12},
        {vital_dist_rate(-0.25, 20, 0.1), logistic_vital(-0.25), 1e-12},
        {vital_dist_rate(0, 20, 0.1), logistic_vital(0), 1e-12},
    };
    double worst = 0;
    bool ok = true;
    for (const auto& c : cases) {
        const double err = std::abs(c.got - c.want);
        worst = std::max(worst, err / c.tol);
        ok = ok && err <= c.tol;
    }
    return {ok, fmt("9 values, worst error %.2f of tolerance", worst)};
}

Verdict health_oracles()
{
    const double h05 = health_raw(0.5, true), h0 = health_raw(0.0, true), h1 = health_raw(1.0, false);
    const double h01 = health_raw(0.1, true);
    const bool ok = std::abs(h05) <= 1e-12 && std::abs(h0 - 1) <= 1e-12 && std::abs(h1 - 1) <= 1e-12 &&
                    std::abs(h01 - 0.5310) <= 1e-4 && std::abs(h01 - binary_health(0.1)) <= 1e-12;
    return {ok, fmt("H(0.5)=%.3g H(0)=%.12g H(1)=%.12g H(0.1)=%.6f", h05, h0, h1, h01)};
}

Verdict zero_residuals()
{
    double worst = 0;
    for (auto mode : {ObserverMode::Independent, ObserverMode::SharedCommand}) {
        auto c = builtin("straight_A");
        c.noise.enabled = false;
        c.observer_mode = mode;
        for (const auto& r : run_scenario(c).log.records) {
            worst = std::max({worst, std::abs(r.r_psi), std::abs(r.r_v)});
        }
    }
    return {worst < 1e-9, fmt("max |r| = %.3g over both observer modes", worst)};
}

Verdict nominal_quiet()
{
    std::vector<ScenarioConfig> configs;
    for (const char* name : {"straight_A", "serpentine_A"}) {
        for (auto& c : seed_sweep(builtin(name), 0, 10)) configs.push_back(std::move(c));
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto results = run_batch(configs);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::size_t events = 0;
    for (const auto& r : results) events += adaptive_events(r.summary);
    return {events == 0 && secs < 30.0,
            fmt("%zu runs (2 paths x seeds 0-9), %zu adaptive events, %.1f s", results.size(), events, secs)};
}

Verdict gyro_offset()
{
    std::string detail;
    bool ok = true;
    for (const char* name : {"straight_B", "serpentine_B"}) {
        const auto s = run_scenario(builtin(name)).summary;
        const bool hit = s.heading_latency && *s.heading_latency <= 2.0;
        ok = ok && hit;
        detail += fmt("%s heading latency %s; ", name, s.heading_latency ? fmt("%.2f s", *s.heading_latency).c_str() : "none");
    }

    // straight-line health dip: pre-fault window is the second before injection
    const auto cfg = builtin("straight_B");
    const double t_inject = cfg.faults.gyro_offset->t_inject;
    const auto log = run_scenario(cfg).log;
    double pre_min = INFINITY, pre_sum = 0, dip = INFINITY;
    std::size_t pre_n = 0, dip_index = 0;
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& r = log.records[i];
        if (r.t >= t_inject - 1.0 && r.t < t_inject) {
            pre_min = std::min(pre_min, r.h);
            pre_sum += r.h;
            ++pre_n;
        } else if (r.t >= t_inject && r.t <= t_inject + 2.0 && r.h < dip) {
            dip = r.h;
            dip_index = i;
        }
    }
    const double pre_level = pre_sum / static_cast<double>(pre_n);
    const double drop = pre_min - dip;
    bool recovered = false;
    double recovered_at = NAN;
    for (std::size_t i = dip_index; i < log.records.size() && !recovered; ++i) {
        if (std::abs(log.records[i].h - pre_level) <= 0.05) {
            recovered = true;
            recovered_at = log.records[i].t;
        }
    }
    ok = ok && drop >= 0.15 && recovered;
    detail += fmt("health drop %.3f below pre-fault min %.3f, back within 0.05 of %.3f at t=%.2f s", drop, pre_min,
                  pre_level, recovered_at);
    return {ok, detail};
}

double cruise_deviation(const TelemetryLog& log, double cruise)
{
    const double t_end = log.records.back().t;
    double sum = 0;
    std::size_t n = 0;
    for (const auto& r : log.records) {
        if (r.t >= t_end - 10.0) {
            sum += std::abs(r.plant_u - cruise);
            ++n;
        }
    }
    return sum / static_cast<double>(n);
}

Verdict motor_failure()
{
    const auto c = run_scenario(builtin("straight_C"));
    const auto a = run_scenario(builtin("straight_A"));
    const auto& s = c.summary;
    const bool both = s.heading_latency && s.velocity_latency && *s.heading_latency <= 2.0 &&
                      *s.velocity_latency <= 2.0;
    const double dev_c = cruise_deviation(c.log, 0.25), dev_a = cruise_deviation(a.log, 0.25);
    const double ratio = dev_c / dev_a;
    return {both && ratio >= 3.0,
            fmt("latency heading %.2f s, velocity %.2f s; last-10 s |u-0.25| C %.4f vs A %.4f (x%.1f)",
                s.heading_latency.value_or(NAN), s.velocity_latency.value_or(NAN), dev_c, dev_a, ratio)};
}

Verdict health_ordering()
{
    const double a = run_scenario(builtin("straight_A")).summary.min_health;
    const double b = run_scenario(builtin("straight_B")).summary.min_health;
    const double c = run_scenario(builtin("straight_C")).summary.min_health;
    return {c <= b && b <= a, fmt("min health C %.4f <= B %.4f <= A %.4f (seed 0)", c, b, a)};
}

Verdict threshold_reduction()
{
    const double dt = 0.01, lp_hz = 0.2;
    const ThresholdParams p{.c = 0.03, .k_d = 0.0, .k_l = 0.0, .static_value = 0.1};
    ThresholdChannel ch(p, 0.5, lp_hz, dt);
    std::mt19937_64 gen(11);
    std::normal_distribution<double> r(0.0, 0.2);
    std::uniform_real_distribution<double> h(0.0, 1.0);
    const double tau = 1.0 / (2 * M_PI * lp_hz);
    const int n = static_cast<int>(std::ceil(10 * tau / dt));
    double v = 0;
    for (int i = 0; i < n; ++i) v = ch.step(r(gen), h(gen));
    const double rel = std::abs(v - p.c) / p.c;
    return {rel <= 0.01, fmt("after %d steps (10 tau) threshold %.6g vs c %.6g (rel err %.2g)", n, v, p.c, rel)};
}

std::string file_hash(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return fmt("%016llx", static_cast<unsigned long long>(fnv1a64(ss.str())));
}

Verdict determinism()
{
    const fs::path root = fs::temp_directory_path() / "rover_acceptance_determinism";
    fs::remove_all(root);
    for (const char* run : {"a", "b"}) {
        const std::string cmd = std::string(ROVERFD_PATH) + " batch --all-builtin --out " + (root / run).string() +
                                " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
            return {false, fmt("roverfd batch exited with status %d", status)};
        }
    }
    std::size_t same = 0, total = 0;
    for (const auto& c : builtin_scenarios()) {
        ++total;
        const auto ha = file_hash(root / "a" / c.name / "telemetry.csv");
        const auto hb = file_hash(root / "b" / c.name / "telemetry.csv");
        same += ha == hb && fs::file_size(root / "a" / c.name / "telemetry.csv") > 0;
    }
    fs::remove_all(root);
    return {same == total, fmt("%zu/%zu telemetry CSVs hash-identical across two batch runs", same, total)};
}

Verdict numerical_substrate()
{
    using S = std::array<double, 1>;
    auto decay = [](double, const S& x) { return S{-x[0]}; };
    auto err = [&](double dt) {
        S x{1.0};
        const int n = static_cast<int>(std::lround(2.0 / dt));
        for (int i = 0; i < n; ++i) x = rk4_step(x, decay, i * dt, dt);
        return std::abs(x[0] - std::exp(-2.0));
    };
    const double order = std::log2(err(0.1) / err(0.05));

    const double dt = 0.01, fc = 0.5;
    const int n = static_cast<int>(std::ceil(10.0 / (2 * M_PI * fc) / dt));
    FilterState lp(FilterKind::LowPass1, fc, dt), hp(FilterKind::HighPass1, fc, dt);
    lp.reset(0.0);
    hp.reset(0.0);
    double y_lp = 0, y_hp = 0;
    for (int i = 0; i < n; ++i) {
        y_lp = lp.step(1.0);
        y_hp = hp.step(1.0);
    }
    const bool ok = order >= 3.5 && std::abs(y_lp - 1.0) <= 1e-2 && std::abs(y_hp) <= 1e-2;
    return {ok, fmt("RK4 order %.3f; after 10 tau low-pass %.5f, high-pass %.5f", order, y_lp, y_hp)};
}

Verdict waypoint_delay()
{
    const auto s = run_scenario(builtin("serpentine_C")).summary;
    const auto& p = s.plant_collection_times;
    const auto& o = s.observer_collection_times;
    bool ok = !o.empty() && p.size() == o.size();
    for (std::size_t i = 0; ok && i < p.size(); ++i) ok = p[i] >= o[i];
    ok = ok && s.collection_deltas.back() > 0;
    return {ok, fmt("%zu/%zu waypoints, final delta %.2f s", p.size(), o.size(),
                    s.collection_deltas.empty() ? NAN : s.collection_deltas.back())};
}

} // namespace

int main()
{
    const auto t0 = std::chrono::steady_clock::now();
    report(1, "vital-function oracles", vital_oracles);
    report(2, "health oracles", health_oracles);
    report(3, "zero residual without faults", zero_residuals);
    report(4, "nominal runs raise no alarms", nominal_quiet);
    report(5, "gyro offset detection", gyro_offset);
    report(6, "motor failure detection", motor_failure);
    report(7, "health ordering C <= B <= A", health_ordering);
    report(8, "threshold reduces to constant", threshold_reduction);
    report(9, "batch determinism", determinism);
    report(10, "numerical substrate", numerical_substrate);
    report(11, "serpentine waypoint delay", waypoint_delay);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%d of 11 criteria failed (%.1f s)\n", failures, secs);
    return failures;
}
