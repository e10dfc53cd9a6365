#pragma once

#include <cstddef>
#include <vector>

#include "rover/vehicle.hpp"

namespace rover {

struct Waypoint {
    double x = 0;
    double y = 0;
    bool operator==(const Waypoint&) const = default;
};

struct Mission {
    std::vector<Waypoint> waypoints;
    double acceptance_radius = 0.2; // half the rover length
    double cruise_speed = 0.25;
    bool operator==(const Mission&) const = default;
};

void validate(const Mission& mission);

struct PidGains {
    double kp = 0;
    double ki = 0;
    double kd = 0;
    double output_limit = 12.0;
    double integral_limit = 0; // bound on the accumulated error integral
    bool operator==(const PidGains&) const = default;
};

void validate(const PidGains& gains, const char* key);

/// PID with output saturation and a clamped integrator.
struct PidController {
    PidGains gains;
    double integral = 0;
    double prev_error = 0;
    bool has_prev = false;

    PidController() = default;
    explicit PidController(PidGains g) : gains(g) {}
};

/// One PID update; advances the controller state. Requires dt > 0.
double pid_step(PidController& c, double error, double dt);

struct GuidanceState {
    std::size_t current_waypoint_index = 0;
    bool mission_complete = false;
    std::vector<double> collection_times;
    double last_heading_demand = 0; // reused when the LOS is degenerate
};

struct LosResult {
    double heading = 0;
    bool degenerate = false;
};

/// Line-of-sight heading from `from` to `to`. Coincident points give 0 with degenerate set.
LosResult los_heading(Waypoint from, Waypoint to);

/// Collects the current waypoint when the rover centre lies within the acceptance radius.
void update_waypoints(GuidanceState& gs, Waypoint position, const Mission& mission, double t);

struct ControllerPair {
    PidController heading;
    PidController velocity;
};

/// Heading and speed loops closed on measured signals. Differential voltage
/// steers (positive turns toward port), common voltage drives.
ActuatorCommand control_step(const SensorReading& reading, GuidanceState& gs, const Mission& mission,
                             ControllerPair& controllers, const RoverParams& params, double dt);

} // namespace rover
