#include "rover/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "rover/errors.hpp"

namespace rover {

void validate(const ScenarioConfig& cfg)
{
    if (!(cfg.dt > 0) || !std::isfinite(cfg.dt)) {
        throw ConfigError("dt", "must be positive");
    }
    if (!(cfg.duration > 0) || !std::isfinite(cfg.duration)) {
        throw ConfigError("duration", "must be positive");
    }
    validate(cfg.mission);
    validate(cfg.rover);
    validate(cfg.faults);
    validate(cfg.gains.heading, "gains.heading");
    validate(cfg.gains.velocity, "gains.velocity");
    validate(cfg.vitals, cfg.dt);
    const double nyquist = 0.5 / cfg.dt;
    const auto& th = cfg.thresholds;
    if (!(th.highpass_hz > 0) || !(th.highpass_hz < nyquist)) {
        throw ConfigError("thresholds.highpass_hz", "must lie in (0, Nyquist)");
    }
    if (!(th.lowpass_hz > 0) || !(th.lowpass_hz < nyquist)) {
        throw ConfigError("thresholds.lowpass_hz", "must lie in (0, Nyquist)");
    }
    if (th.debounce < 1) {
        throw ConfigError("thresholds.debounce", "must be at least 1");
    }
    for (auto [p, key] : {std::pair{&th.heading, "thresholds.heading"}, std::pair{&th.velocity, "thresholds.velocity"}}) {
        if (!(p->c > 0)) throw ConfigError(std::string(key) + ".c", "must be positive");
        if (!(p->k_d >= 0)) throw ConfigError(std::string(key) + ".k_d", "must be non-negative");
        if (!(p->k_l >= 0)) throw ConfigError(std::string(key) + ".k_l", "must be non-negative");
        if (!(p->static_value > 0)) throw ConfigError(std::string(key) + ".static", "must be positive");
    }
    const auto& s = cfg.noise.sigma;
    for (double v : {s.heading, s.gyro, s.accel, s.speed, s.position}) {
        if (!(v >= 0)) throw ConfigError("noise", "standard deviations must be non-negative");
    }
    if (!std::isfinite(cfg.start.x) || !std::isfinite(cfg.start.y) || !std::isfinite(cfg.start.psi)) {
        throw ConfigError("start", "start pose must be finite");
    }
}

std::optional<double> first_injection_time(const FaultSet& faults)
{
    std::optional<double> t;
    if (faults.gyro_offset) {
        t = faults.gyro_offset->t_inject;
    }
    if (faults.motor_failure) {
        t = t ? std::min(*t, faults.motor_failure->t_inject) : faults.motor_failure->t_inject;
    }
    return t;
}

namespace {

bool finite(const BodyState& s)
{
    return std::isfinite(s.u) && std::isfinite(s.r) && std::isfinite(s.x) && std::isfinite(s.y) &&
           std::isfinite(s.psi);
}

Waypoint current_target(const GuidanceState& gs, const Mission& m)
{
    return m.waypoints[std::min(gs.current_waypoint_index, m.waypoints.size() - 1)];
}

struct Detectors {
    DetectorState psi_adaptive, v_adaptive, psi_static, v_static;
    explicit Detectors(int n) : psi_adaptive(n), v_adaptive(n), psi_static(n), v_static(n) {}
};

// Feeds one record through the four detectors, appending events to the summary.
void run_detectors(Detectors& d, const TelemetryRecord& rec, RunSummary* summary)
{
    auto feed = [&](DetectorState& ds, double r, double thr, Channel ch, DetectorKind kind) {
        const DetectOutcome out = ds.detect(r, thr, ch, kind, rec.t);
        if (summary && out.raised) {
            summary->detections.push_back(*out.raised);
        }
        if (summary && out.cleared) {
            summary->clears.push_back(*out.cleared);
        }
    };
    feed(d.psi_adaptive, rec.r_psi, rec.thr_psi_adaptive, Channel::Heading, DetectorKind::Adaptive);
    feed(d.v_adaptive, rec.r_v, rec.thr_v_adaptive, Channel::Velocity, DetectorKind::Adaptive);
    feed(d.psi_static, rec.r_psi, rec.thr_psi_static, Channel::Heading, DetectorKind::Static);
    feed(d.v_static, rec.r_v, rec.thr_v_static, Channel::Velocity, DetectorKind::Static);
}

} // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg)
{
    validate(cfg);

    const double dt = cfg.dt;
    const Mission& mission = cfg.mission;
    const bool shared = cfg.observer_mode == ObserverMode::SharedCommand;
    const FaultSet no_faults{};
    const SensorNoise no_noise{0, 0, 0, 0, 0};

    NoiseSource plant_noise(cfg.noise.seed, cfg.noise.enabled);
    NoiseSource observer_noise(0, false);

    BodyState plant = initial_state(cfg.terrain, cfg.start.x, cfg.start.y, cfg.start.psi);
    BodyState observer = plant;
    BodyState plant_prev = plant;
    BodyState observer_prev = observer;

    GuidanceState plant_gs, observer_gs;
    ControllerPair plant_ctl{PidController(cfg.gains.heading), PidController(cfg.gains.velocity)};
    ControllerPair observer_ctl = plant_ctl;

    MonitorState monitor(cfg.vitals, dt, cfg.noise.enabled);
    ThresholdChannel thr_psi(cfg.thresholds.heading, cfg.thresholds.highpass_hz, cfg.thresholds.lowpass_hz, dt);
    ThresholdChannel thr_v(cfg.thresholds.velocity, cfg.thresholds.highpass_hz, cfg.thresholds.lowpass_hz, dt);
    const double static_psi = static_threshold(cfg.thresholds.heading, Channel::Heading);
    const double static_v = static_threshold(cfg.thresholds.velocity, Channel::Velocity);
    Detectors detectors(cfg.thresholds.debounce);

    ScenarioResult result;
    TelemetryLog& log = result.log;
    const auto max_steps = static_cast<std::uint64_t>(std::floor(cfg.duration / dt + 1e-9));
    log.records.reserve(static_cast<std::size_t>(max_steps) + 1);

    SimClock clock(dt);
    try {
        while (clock.step_index() <= max_steps) {
            const double t = clock.t();

            const SensorReading reading = sense(plant, plant_prev, cfg.faults, cfg.noise.sigma, plant_noise, t, dt);
            update_waypoints(plant_gs, {reading.x_meas, reading.y_meas}, mission, t);
            const ActuatorCommand cmd = control_step(reading, plant_gs, mission, plant_ctl, cfg.rover, dt);

            const SensorReading obs_reading =
                sense(observer, observer_prev, no_faults, no_noise, observer_noise, t, dt);
            update_waypoints(observer_gs, {obs_reading.x_meas, obs_reading.y_meas}, mission, t);
            const ActuatorCommand obs_cmd =
                shared ? cmd : control_step(obs_reading, observer_gs, mission, observer_ctl, cfg.rover, dt);

            const ResidualSample res = residuals(observer.psi, observer.u, reading.psi_meas, reading.speed_meas, t);
            const HealthSample health = monitor.step(reading, cmd, current_target(plant_gs, mission), dt);
            const VitalVector& vit = monitor.last_vitals();

            TelemetryRecord rec;
            rec.t = t;
            rec.plant_x = plant.x;
            rec.plant_y = plant.y;
            rec.plant_psi = plant.psi;
            rec.plant_u = plant.u;
            rec.obs_x = observer.x;
            rec.obs_y = observer.y;
            rec.obs_psi = observer.psi;
            rec.obs_u = observer.u;
            rec.psi_meas = reading.psi_meas;
            rec.speed_meas = reading.speed_meas;
            rec.accel_x = reading.accel_x;
            rec.v_left = cmd.v_left;
            rec.v_right = cmd.v_right;
            rec.vital_ax = vit.v_accel;
            rec.vital_ddot = vit.v_dist_rate;
            rec.vital_psidot = vit.v_heading_rate;
            rec.vital_vdot = vit.v_voltage_rate;
            rec.p = health.p;
            rec.h_raw = health.h_raw;
            rec.h = health.h_filtered;
            rec.r_psi = res.r_psi;
            rec.r_v = res.r_v;
            rec.thr_psi_adaptive = thr_psi.step(res.r_psi, health.h_filtered);
            rec.thr_v_adaptive = thr_v.step(res.r_v, health.h_filtered);
            rec.thr_psi_static = static_psi;
            rec.thr_v_static = static_v;
            run_detectors(detectors, rec, nullptr);
            rec.alarm_psi = detectors.psi_adaptive.active_alarm();
            rec.alarm_v = detectors.v_adaptive.active_alarm();
            log.records.push_back(rec);

            const bool done = shared ? plant_gs.mission_complete
                                     : (plant_gs.mission_complete && observer_gs.mission_complete);
            if (done) {
                break;
            }

            const BodyState plant_next = integrate_step(plant, cmd, cfg.faults, cfg.terrain, cfg.rover, t, dt);
            const BodyState observer_next =
                integrate_step(observer, obs_cmd, no_faults, cfg.terrain, cfg.rover, t, dt);
            if (!finite(plant_next) || !finite(observer_next)) {
                throw SimulationError(t + dt, "non-finite state");
            }
            plant_prev = plant;
            plant = plant_next;
            observer_prev = observer;
            observer = observer_next;
            clock.advance();
        }
    } catch (const SimulationError& e) {
        log.aborted = true;
        log.abort_reason = e.what();
    } catch (const DomainError& e) {
        log.aborted = true;
        log.abort_reason = e.what();
    }

    log.plant_collection_times = plant_gs.collection_times;
    log.observer_collection_times = observer_gs.collection_times;
    if (!log.records.empty()) {
        result.summary = summarize(log, cfg);
    } else {
        result.summary.name = cfg.name;
        result.summary.aborted = log.aborted;
        result.summary.abort_reason = log.abort_reason;
    }
    return result;
}

RunSummary summarize(const TelemetryLog& log, const ScenarioConfig& cfg)
{
    if (log.records.empty()) {
        throw DomainError("summarize: empty telemetry log");
    }
    RunSummary s;
    s.name = cfg.name;
    s.waypoint_count = cfg.mission.waypoints.size();
    s.steps = log.records.size();
    s.end_time = log.records.back().t;
    s.aborted = log.aborted;
    s.abort_reason = log.abort_reason;

    Detectors detectors(cfg.thresholds.debounce);
    s.min_health = log.records.front().h;
    for (const auto& rec : log.records) {
        run_detectors(detectors, rec, &s);
        s.min_health = std::min(s.min_health, rec.h);
    }
    s.final_health = log.records.back().h;

    s.t_inject = first_injection_time(cfg.faults);
    if (s.t_inject) {
        for (const auto& ev : s.detections) {
            if (ev.detector != DetectorKind::Adaptive || ev.t < *s.t_inject) {
                continue;
            }
            const double latency = ev.t - *s.t_inject;
            if (!s.detection_latency) {
                s.detection_latency = latency;
            }
            auto& per_channel = ev.channel == Channel::Heading ? s.heading_latency : s.velocity_latency;
            if (!per_channel) {
                per_channel = latency;
            }
        }
    }

    s.plant_collection_times = log.plant_collection_times;
    s.observer_collection_times = log.observer_collection_times;
    const std::size_t n = std::min(s.plant_collection_times.size(), s.observer_collection_times.size());
    for (std::size_t i = 0; i < n; ++i) {
        s.collection_deltas.push_back(s.plant_collection_times[i] - s.observer_collection_times[i]);
    }
    return s;
}

std::vector<ScenarioConfig> builtin_scenarios()
{
    // gentle rolling surface standing in for a crater-floor patch
    const Terrain surface(SinusoidTerrain{.amplitude = 0.02, .wavelength = 8.0, .azimuth = 0.3});

    ScenarioConfig base;
    base.terrain = surface;
    base.duration = 240.0;
    base.dt = 0.01;

    Mission straight;
    straight.waypoints = {{20.0, 0.0}};

    Mission serpentine;
    serpentine.waypoints = {{6.0, 1.5}, {12.0, -1.5}, {18.0, 1.5}, {24.0, -1.5}, {30.0, 1.5}};

    const FaultSet none{};
    FaultSet gyro;
    gyro.gyro_offset = GyroOffsetFault{.offset = deg_to_rad(10.0), .t_inject = 5.0};
    FaultSet motor;
    motor.motor_failure = MotorFailureFault{.wheel_index = 0, .t_inject = 5.0};

    std::vector<ScenarioConfig> out;
    for (const auto& [path_name, mission] : {std::pair{"straight", straight}, std::pair{"serpentine", serpentine}}) {
        for (const auto& [suffix, faults] : {std::pair{"A", none}, std::pair{"B", gyro}, std::pair{"C", motor}}) {
            ScenarioConfig c = base;
            c.name = std::string(path_name) + "_" + suffix;
            c.mission = mission;
            c.faults = faults;
            out.push_back(std::move(c));
        }
    }
    return out;
}

std::optional<ScenarioConfig> find_builtin(const std::string& name)
{
    for (auto& c : builtin_scenarios()) {
        if (c.name == name) {
            return c;
        }
    }
    return std::nullopt;
}

} // namespace rover
