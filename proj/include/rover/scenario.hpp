#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rover/fdi.hpp"
#include "rover/gnc.hpp"
#include "rover/monitor.hpp"
#include "rover/terrain.hpp"
#include "rover/vehicle.hpp"

namespace rover {

enum class ObserverMode { Independent, SharedCommand };

struct ControlGains {
    PidGains heading{.kp = 12.0, .ki = 0.5, .kd = 1.5, .output_limit = 12.0, .integral_limit = 12.0};
    PidGains velocity{.kp = 20.0, .ki = 8.0, .kd = 0.0, .output_limit = 12.0, .integral_limit = 0.75};
    bool operator==(const ControlGains&) const = default;
};

struct ThresholdConfig {
    ThresholdParams heading{.c = 0.03, .k_d = 2.0, .k_l = 1.0, .static_value = 0.1};
    ThresholdParams velocity{.c = 0.02, .k_d = 2.0, .k_l = 1.0, .static_value = 0.05};
    double highpass_hz = 0.5;
    double lowpass_hz = 0.2;
    int debounce = 3;
    bool operator==(const ThresholdConfig&) const = default;
};

struct NoiseConfig {
    bool enabled = true;
    std::uint64_t seed = 0;
    SensorNoise sigma{};
    bool operator==(const NoiseConfig&) const = default;
};

struct StartPose {
    double x = 0;
    double y = 0;
    double psi = 0;
    bool operator==(const StartPose&) const = default;
};

struct ScenarioConfig {
    std::string name = "custom";
    Terrain terrain{};
    Mission mission{};
    StartPose start{};
    RoverParams rover{};
    ControlGains gains{};
    VitalParams vitals{};
    ThresholdConfig thresholds{};
    FaultSet faults{};
    NoiseConfig noise{};
    double duration = 240.0;
    double dt = 0.01;
    ObserverMode observer_mode = ObserverMode::Independent;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ConfigError naming the first invalid field.
void validate(const ScenarioConfig& cfg);

/// Earliest injection time over all configured faults.
std::optional<double> first_injection_time(const FaultSet& faults);

/// One row per simulation step. Alarm flags are those of the adaptive detector.
struct TelemetryRecord {
    double t = 0;
    double plant_x = 0, plant_y = 0, plant_psi = 0, plant_u = 0;
    double obs_x = 0, obs_y = 0, obs_psi = 0, obs_u = 0;
    double psi_meas = 0, speed_meas = 0, accel_x = 0;
    double v_left = 0, v_right = 0;
    double vital_ax = 0, vital_ddot = 0, vital_psidot = 0, vital_vdot = 0;
    double p = 0, h_raw = 0, h = 0;
    double r_psi = 0, r_v = 0;
    double thr_psi_adaptive = 0, thr_v_adaptive = 0;
    double thr_psi_static = 0, thr_v_static = 0;
    bool alarm_psi = false, alarm_v = false;

    bool operator==(const TelemetryRecord&) const = default;
};

struct TelemetryLog {
    std::vector<TelemetryRecord> records;
    std::vector<double> plant_collection_times;
    std::vector<double> observer_collection_times;
    bool aborted = false;
    std::string abort_reason;
};

struct RunSummary {
    std::string name;
    std::string config_hash; // filled in by the I/O layer
    std::vector<DetectionEvent> detections;
    std::vector<AlarmClear> clears;
    std::optional<double> detection_latency;
    std::optional<double> heading_latency;
    std::optional<double> velocity_latency;
    std::optional<double> t_inject;
    double min_health = 1.0;
    double final_health = 1.0;
    std::size_t waypoint_count = 0;
    std::vector<double> plant_collection_times;
    std::vector<double> observer_collection_times;
    std::vector<double> collection_deltas; // plant minus observer
    std::size_t steps = 0;
    double end_time = 0;
    bool aborted = false;
    std::string abort_reason;
};

struct ScenarioResult {
    TelemetryLog log;
    RunSummary summary;
};

/// Runs the faulty plant and the fault-free observer side by side.
/// Config errors throw before stepping; a non-finite state stops the run
/// and is reported through log.aborted with the partial log kept.
ScenarioResult run_scenario(const ScenarioConfig& cfg);

/// Replays the debounced detectors over the log. Throws DomainError on an empty log.
RunSummary summarize(const TelemetryLog& log, const ScenarioConfig& cfg);

/// straight_{A,B,C} and serpentine_{A,B,C}.
std::vector<ScenarioConfig> builtin_scenarios();
std::optional<ScenarioConfig> find_builtin(const std::string& name);

} // namespace rover
