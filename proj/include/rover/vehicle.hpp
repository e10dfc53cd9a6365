#pragma once

#include <array>
#include <optional>
#include <vector>

#include "rover/sim_core.hpp"
#include "rover/terrain.hpp"

namespace rover {

inline constexpr std::size_t kWheelCount = 6;

/// Body velocities plus earth-frame pose.
/// Planar convention: psi measured from +x toward +y, r = psi_dot; positive r
/// turns the rover toward its port (left) side.
struct BodyState {
    double u = 0, v = 0, w = 0;
    double p = 0, q = 0, r = 0;
    double x = 0, y = 0, z = 0;
    double phi = 0, theta = 0, psi = 0;

    bool operator==(const BodyState&) const = default;
};

struct MotorParams {
    double torque_constant = 0.006;  // K_t/R_a lumped, N*m per volt
    double back_emf_constant = 0.3;  // V*s/rad
    double max_voltage = 12.0;       // V
    bool operator==(const MotorParams&) const = default;
};

struct RoverParams {
    double mass = 5.0;
    double yaw_inertia = 0.15;
    double surge_damping = 2.0; // N*s/m
    double sway_damping = 2.0;  // unused by the planar realization (v == 0)
    double yaw_damping = 0.2;   // N*m*s/rad
    double length = 0.4;
    double track_width = 0.3;
    double wheel_radius = 0.06;
    MotorParams motor{};
    double rolling_resistance_coeff = 0.03;
    double drag_coeff_failed_wheel = 0.5;
    double gravity = 3.71;

    bool operator==(const RoverParams&) const = default;
};

/// Throws ConfigError naming the offending field.
void validate(const RoverParams& params);

struct ActuatorCommand {
    double v_left = 0;
    double v_right = 0;
    double mean() const noexcept { return 0.5 * (v_left + v_right); }
    bool operator==(const ActuatorCommand&) const = default;
};

struct GyroOffsetFault {
    double offset = 0;   // rad, added to the measured heading
    double t_inject = 0; // s
    bool operator==(const GyroOffsetFault&) const = default;
};

/// Wheel indices: 0..2 left (front, middle, rear), 3..5 right (front, middle, rear).
struct MotorFailureFault {
    int wheel_index = 0;
    double t_inject = 0;
    bool operator==(const MotorFailureFault&) const = default;
};

struct FaultSet {
    std::optional<GyroOffsetFault> gyro_offset;
    std::optional<MotorFailureFault> motor_failure;

    bool gyro_active(double t) const { return gyro_offset && t >= gyro_offset->t_inject; }
    bool motor_failed(std::size_t wheel, double t) const
    {
        return motor_failure && t >= motor_failure->t_inject &&
               static_cast<std::size_t>(motor_failure->wheel_index) == wheel;
    }
    bool operator==(const FaultSet&) const = default;
};

void validate(const FaultSet& faults);

struct SensorNoise {
    double heading = deg_to_rad(0.1); // rad
    double gyro = deg_to_rad(0.2);    // rad/s
    double accel = 0.02;              // m/s^2
    double speed = 0.005;             // m/s
    double position = 0.0;            // m
    bool operator==(const SensorNoise&) const = default;
};

struct SensorReading {
    double psi_meas = 0;
    double gyro_rate = 0;
    double accel_x = 0;
    double speed_meas = 0;
    double x_meas = 0;
    double y_meas = 0;
    double t = 0;
};

/// Lateral offset of a wheel from the centreline, positive to port.
double wheel_lateral_offset(std::size_t wheel, const RoverParams& params);

/// Propulsive force of one wheel driven at `v_cmd` while spinning at `wheel_speed`.
double wheel_force(double v_cmd, double wheel_speed, const RoverParams& params);

struct WheelLoads {
    std::array<double, kWheelCount> force{}; // surge force per wheel, N
    double drag_force = 0;                   // total surge force from failed wheels, N
    double drag_moment = 0;                  // yaw moment from failed wheels, N*m
};

/// Zeroes failed wheels' propulsion and adds their sliding drag.
WheelLoads apply_motor_failure(const std::array<double, kWheelCount>& forces, const FaultSet& faults,
                               const BodyState& state, const RoverParams& params, double t);

/// Derivative of the full body state. Only u, r, x, y and psi evolve through
/// dynamics; z, phi and theta are pinned to the terrain by the integrator.
BodyState dynamics_derivative(const BodyState& state, const ActuatorCommand& cmd, const FaultSet& faults,
                              const Terrain& terrain, const RoverParams& params, double t);

/// RK4 advance of the plant by dt, then re-seats the rover on the terrain.
BodyState integrate_step(const BodyState& state, const ActuatorCommand& cmd, const FaultSet& faults,
                         const Terrain& terrain, const RoverParams& params, double t, double dt);

/// Places a rover at (x, y, psi) at rest on the surface.
BodyState initial_state(const Terrain& terrain, double x, double y, double psi);

/// Sensor model. The gyro offset corrupts only the measured heading.
SensorReading sense(const BodyState& state, const BodyState& prev_state, const FaultSet& faults,
                    const SensorNoise& sigma, NoiseSource& noise, double t, double dt);

/// Saturates a voltage to the motor limit.
double saturate_voltage(double v, const RoverParams& params);

} // namespace rover
