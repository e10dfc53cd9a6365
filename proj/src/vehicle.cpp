#include "rover/vehicle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rover/errors.hpp"

namespace rover {

namespace {

// Smooth sign so that Coulomb-type forces do not chatter around u = 0.
constexpr double kSignVelocityScale = 1e-3; // m/s

double smooth_sign(double u) { return std::tanh(u / kSignVelocityScale); }

void require_positive(double v, const char* key)
{
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw ConfigError(key, "must be positive");
    }
}

} // namespace

void validate(const RoverParams& p)
{
    require_positive(p.mass, "rover.mass");
    require_positive(p.yaw_inertia, "rover.yaw_inertia");
    require_positive(p.surge_damping, "rover.surge_damping");
    require_positive(p.sway_damping, "rover.sway_damping");
    require_positive(p.yaw_damping, "rover.yaw_damping");
    require_positive(p.length, "rover.length");
    require_positive(p.track_width, "rover.track_width");
    require_positive(p.wheel_radius, "rover.wheel_radius");
    require_positive(p.motor.torque_constant, "rover.motor.torque_constant");
    require_positive(p.motor.back_emf_constant, "rover.motor.back_emf_constant");
    require_positive(p.motor.max_voltage, "rover.motor.max_voltage");
    require_positive(p.rolling_resistance_coeff, "rover.rolling_resistance_coeff");
    require_positive(p.drag_coeff_failed_wheel, "rover.drag_coeff_failed_wheel");
    require_positive(p.gravity, "rover.gravity");
    if (!(p.track_width < 2.0 * p.length)) {
        throw ConfigError("rover.track_width", "must be less than twice the rover length");
    }
}

void validate(const FaultSet& faults)
{
    if (faults.gyro_offset) {
        if (!(faults.gyro_offset->t_inject >= 0.0)) {
            throw ConfigError("faults.t_inject", "must be non-negative");
        }
        if (!std::isfinite(faults.gyro_offset->offset)) {
            throw ConfigError("faults.offset_deg", "must be finite");
        }
    }
    if (faults.motor_failure) {
        if (!(faults.motor_failure->t_inject >= 0.0)) {
            throw ConfigError("faults.t_inject", "must be non-negative");
        }
        if (faults.motor_failure->wheel_index < 0 ||
            faults.motor_failure->wheel_index >= static_cast<int>(kWheelCount)) {
            throw ConfigError("faults.wheel", "wheel index must be in [0, 5]");
        }
    }
}

double wheel_lateral_offset(std::size_t wheel, const RoverParams& params)
{
    return wheel < 3 ? 0.5 * params.track_width : -0.5 * params.track_width;
}

double saturate_voltage(double v, const RoverParams& params)
{
    const double lim = params.motor.max_voltage;
    return std::clamp(v, -lim, lim);
}

double wheel_force(double v_cmd, double wheel_speed, const RoverParams& params)
{
    const auto& m = params.motor;
    const double f = m.torque_constant * (v_cmd - m.back_emf_constant * wheel_speed) / params.wheel_radius;
    const double f_max = m.torque_constant * m.max_voltage / params.wheel_radius;
    return std::clamp(f, -f_max, f_max);
}

WheelLoads apply_motor_failure(const std::array<double, kWheelCount>& forces, const FaultSet& faults,
                               const BodyState& state, const RoverParams& params, double t)
{
    WheelLoads out;
    out.force = forces;
    const double normal_load = params.mass * params.gravity / static_cast<double>(kWheelCount);
    for (std::size_t i = 0; i < kWheelCount; ++i) {
        if (!faults.motor_failed(i, t)) {
            continue;
        }
        out.force[i] = 0.0;
        const double drag = -smooth_sign(state.u) * params.drag_coeff_failed_wheel * normal_load;
        out.drag_force += drag;
        // moment of a surge force applied at lateral offset y is -y * F
        out.drag_moment += -wheel_lateral_offset(i, params) * drag;
    }
    return out;
}

BodyState dynamics_derivative(const BodyState& s, const ActuatorCommand& cmd, const FaultSet& faults,
                              const Terrain& terrain, const RoverParams& params, double t)
{
    std::array<double, kWheelCount> forces{};
    for (std::size_t i = 0; i < kWheelCount; ++i) {
        const double y_i = wheel_lateral_offset(i, params);
        const double wheel_speed = (s.u - s.r * y_i) / params.wheel_radius;
        const double v = saturate_voltage(i < 3 ? cmd.v_left : cmd.v_right, params);
        forces[i] = wheel_force(v, wheel_speed, params);
    }
    const WheelLoads loads = apply_motor_failure(forces, faults, s, params, t);

    double propulsion = 0.0;
    double moment = 0.0;
    for (std::size_t i = 0; i < kWheelCount; ++i) {
        propulsion += loads.force[i];
        moment += -wheel_lateral_offset(i, params) * loads.force[i];
    }

    // gravity and rolling resistance from the local surface plane
    const auto [gx, gy] = terrain.gradient(s.x, s.y);
    const double c = std::cos(s.psi);
    const double sn = std::sin(s.psi);
    const double rise = gx * c + gy * sn; // dh/ds along the heading
    const double pitch_up = std::atan(rise);
    const double weight = params.mass * params.gravity;
    const double grade_force = -weight * std::sin(pitch_up);
    const double rolling = -params.rolling_resistance_coeff * weight * std::cos(pitch_up) * smooth_sign(s.u);

    const double surge = propulsion + loads.drag_force - params.surge_damping * s.u + grade_force + rolling;
    const double yaw = moment + loads.drag_moment - params.yaw_damping * s.r;
    if (!std::isfinite(surge) || !std::isfinite(yaw)) {
        throw SimulationError(t, "non-finite force");
    }

    BodyState d;
    d.u = surge / params.mass;
    d.r = yaw / params.yaw_inertia;
    const double cos_pitch = std::cos(pitch_up);
    d.x = s.u * c * cos_pitch;
    d.y = s.u * sn * cos_pitch;
    d.psi = s.r;
    return d;
}

BodyState integrate_step(const BodyState& state, const ActuatorCommand& cmd, const FaultSet& faults,
                         const Terrain& terrain, const RoverParams& params, double t, double dt)
{
    using Vec = std::array<double, 5>;
    const Vec x0{state.u, state.r, state.x, state.y, state.psi};
    auto deriv = [&](double tk, const Vec& v) {
        BodyState s = state;
        s.u = v[0];
        s.r = v[1];
        s.x = v[2];
        s.y = v[3];
        s.psi = v[4];
        const BodyState d = dynamics_derivative(s, cmd, faults, terrain, params, tk);
        return Vec{d.u, d.r, d.x, d.y, d.psi};
    };
    const Vec x1 = rk4_step(x0, deriv, t, dt);

    BodyState next = state;
    next.u = x1[0];
    next.r = x1[1];
    next.x = x1[2];
    next.y = x1[3];
    next.psi = wrap_angle(x1[4]);
    next.v = next.w = next.p = next.q = 0.0;
    next.z = -terrain.height(next.x, next.y);
    const Attitude att = attitude_from_terrain(terrain, next.x, next.y, next.psi);
    next.phi = att.phi;
    next.theta = att.theta;
    return next;
}

BodyState initial_state(const Terrain& terrain, double x, double y, double psi)
{
    BodyState s;
    s.x = x;
    s.y = y;
    s.psi = wrap_angle(psi);
    s.z = -terrain.height(x, y);
    const Attitude att = attitude_from_terrain(terrain, x, y, s.psi);
    s.phi = att.phi;
    s.theta = att.theta;
    return s;
}

SensorReading sense(const BodyState& state, const BodyState& prev_state, const FaultSet& faults,
                    const SensorNoise& sigma, NoiseSource& noise, double t, double dt)
{
    // fixed draw order keeps streams aligned between faulty and nominal runs
    const double n_heading = noise.sample(sigma.heading);
    const double n_gyro = noise.sample(sigma.gyro);
    const double n_accel = noise.sample(sigma.accel);
    const double n_speed = noise.sample(sigma.speed);
    const double n_x = noise.sample(sigma.position);
    const double n_y = noise.sample(sigma.position);

    SensorReading r;
    r.t = t;
    const double offset = faults.gyro_active(t) ? faults.gyro_offset->offset : 0.0;
    r.psi_meas = wrap_angle(state.psi + offset + n_heading);
    r.gyro_rate = state.r + n_gyro;
    r.accel_x = (state.u - prev_state.u) / dt + n_accel;
    r.speed_meas = state.u + n_speed;
    r.x_meas = state.x + n_x;
    r.y_meas = state.y + n_y;
    return r;
}

} // namespace rover
