#pragma once

#include <deque>
#include <optional>

#include "rover/gnc.hpp"
#include "rover/sim_core.hpp"
#include "rover/vehicle.hpp"

namespace rover {

/// Four degradation likelihoods, each in [0, 1].
struct VitalVector {
    double v_accel = 0;
    double v_dist_rate = 0;
    double v_heading_rate = 0;
    double v_voltage_rate = 0;
};

/// What the commanded-voltage vital is evaluated on.
enum class VoltageVitalInput { Rate, Level };

struct VitalParams {
    double sigma_accel = 0.4;
    double sigma_heading = 0.4;
    double sigma_voltage = 0.4;
    double k = 20.0;  // logistic steepness, s/m
    double x0 = 0.1;  // logistic midpoint, m/s
    VoltageVitalInput voltage_input = VoltageVitalInput::Rate;
    bool clamp_p = true;
    std::size_t distance_rate_window = 5;
    // Second-order low-pass on the differenced inputs (accel, distance rate,
    // voltage rate); the gyro rate enters raw. 0 disables.
    double input_cutoff_hz = 0.5;
    double health_cutoff_hz = 1.0;

    bool operator==(const VitalParams&) const = default;
};

void validate(const VitalParams& params, double dt);

struct HealthSample {
    double p = 0;
    double h_raw = 1;
    double h_filtered = 1;
};

/// 1 - N(x; 0, sigma) scaled Gaussian density, clamped to [0, 1].
double vital_gaussian(double x, double sigma);

/// Logistic sigmoid 1 / (1 + exp(-k (d_dot - x0))).
double vital_dist_rate(double d_dot, double k, double x0);

/// Mean of the four vitals (normalisation factor 1/4).
double degradation_probability(const VitalVector& v);

/// One minus the binary entropy (bits) of the faulty / non-faulty outcome pair.
/// With clamp_p the probability is capped at 0.5 so health never rises with p.
double health_raw(double p, bool clamp_p);

class MonitorState {
public:
    MonitorState(const VitalParams& params, double dt, bool smooth_distance_rate);

    /// Raw finite-difference rate of change of distance to target; 0 on the first call.
    double distance_rate(Waypoint position, Waypoint target, double dt);

    VitalVector compute_vitals(const SensorReading& reading, const ActuatorCommand& cmd, Waypoint target,
                               double dt);

    HealthSample step(const SensorReading& reading, const ActuatorCommand& cmd, Waypoint target, double dt);

    const VitalVector& last_vitals() const noexcept { return last_vitals_; }
    const VitalParams& params() const noexcept { return params_; }

private:
    double condition(std::optional<FilterState>& f, double x);

    VitalParams params_;
    bool smooth_distance_rate_;
    std::optional<Waypoint> prev_position_;
    std::optional<double> prev_voltage_mean_;
    std::deque<double> distance_rate_window_;
    std::optional<FilterState> accel_filter_, dist_filter_, voltage_filter_;
    FilterState health_filter_;
    VitalVector last_vitals_{};
};

/// Free-function form of MonitorState::step.
inline HealthSample monitor_step(MonitorState& ms, const SensorReading& reading, const ActuatorCommand& cmd,
                                 Waypoint target, double dt)
{
    return ms.step(reading, cmd, target, dt);
}

} // namespace rover
