#include "rover/gnc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rover/errors.hpp"

namespace rover {

void validate(const Mission& mission)
{
    if (mission.waypoints.empty()) {
        throw ConfigError("mission.waypoints", "at least one waypoint is required");
    }
    for (const auto& w : mission.waypoints) {
        if (!std::isfinite(w.x) || !std::isfinite(w.y)) {
            throw ConfigError("mission.waypoints", "waypoint coordinates must be finite");
        }
    }
    if (!(mission.acceptance_radius > 0.0)) {
        throw ConfigError("mission.acceptance_radius", "must be positive");
    }
    if (!(mission.cruise_speed > 0.0)) {
        throw ConfigError("mission.cruise_speed", "must be positive");
    }
}

void validate(const PidGains& g, const char* key)
{
    const std::string k(key);
    if (!(g.kp >= 0) || !(g.ki >= 0) || !(g.kd >= 0)) {
        throw ConfigError(k, "gains must be non-negative");
    }
    if (!(g.output_limit > 0)) {
        throw ConfigError(k + ".output_limit", "must be positive");
    }
    if (!(g.integral_limit >= 0)) {
        throw ConfigError(k + ".integral_limit", "must be non-negative");
    }
}

double pid_step(PidController& c, double error, double dt)
{
    const auto& g = c.gains;
    c.integral = std::clamp(c.integral + error * dt, -g.integral_limit, g.integral_limit);
    const double derivative = c.has_prev ? (error - c.prev_error) / dt : 0.0;
    c.prev_error = error;
    c.has_prev = true;
    const double out = g.kp * error + g.ki * c.integral + g.kd * derivative;
    return std::clamp(out, -g.output_limit, g.output_limit);
}

LosResult los_heading(Waypoint from, Waypoint to)
{
    const double dx = to.x - from.x;
    const double dy = to.y - from.y;
    if (dx == 0.0 && dy == 0.0) {
        return {0.0, true};
    }
    return {wrap_angle(std::atan2(dy, dx)), false};
}

void update_waypoints(GuidanceState& gs, Waypoint position, const Mission& mission, double t)
{
    if (gs.mission_complete) {
        return;
    }
    const Waypoint& target = mission.waypoints[gs.current_waypoint_index];
    const double d = std::hypot(target.x - position.x, target.y - position.y);
    if (d <= mission.acceptance_radius) {
        gs.collection_times.push_back(t);
        ++gs.current_waypoint_index;
        if (gs.current_waypoint_index >= mission.waypoints.size()) {
            gs.mission_complete = true;
        }
    }
}

ActuatorCommand control_step(const SensorReading& reading, GuidanceState& gs, const Mission& mission,
                             ControllerPair& controllers, const RoverParams& params, double dt)
{
    if (gs.mission_complete) {
        return {};
    }
    const Waypoint& target = mission.waypoints[gs.current_waypoint_index];
    const LosResult los = los_heading({reading.x_meas, reading.y_meas}, target);
    const double demand = los.degenerate ? gs.last_heading_demand : los.heading;
    gs.last_heading_demand = demand;

    const double heading_error = wrap_angle(demand - reading.psi_meas);
    const double differential = pid_step(controllers.heading, heading_error, dt);
    const double common = pid_step(controllers.velocity, mission.cruise_speed - reading.speed_meas, dt);

    return {saturate_voltage(common - differential, params), saturate_voltage(common + differential, params)};
}

} // namespace rover
