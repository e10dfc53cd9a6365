#include "rover/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rover/errors.hpp"

namespace rover {

void validate(const VitalParams& p, double dt)
{
    if (!(p.sigma_accel > 0)) throw ConfigError("vitals.sigma_accel", "must be positive");
    if (!(p.sigma_heading > 0)) throw ConfigError("vitals.sigma_heading", "must be positive");
    if (!(p.sigma_voltage > 0)) throw ConfigError("vitals.sigma_voltage", "must be positive");
    if (!(p.k > 0)) throw ConfigError("vitals.k", "must be positive");
    if (!std::isfinite(p.x0)) throw ConfigError("vitals.x0", "must be finite");
    if (p.distance_rate_window == 0) throw ConfigError("vitals.distance_rate_window", "must be at least 1");
    const double nyquist = 0.5 / dt;
    if (!(p.input_cutoff_hz >= 0) || !(p.input_cutoff_hz < nyquist)) {
        throw ConfigError("vitals.input_cutoff_hz", "must be 0 (off) or below Nyquist");
    }
    if (!(p.health_cutoff_hz > 0) || !(p.health_cutoff_hz < nyquist)) {
        throw ConfigError("vitals.health_cutoff_hz", "must lie in (0, Nyquist)");
    }
}

double vital_gaussian(double x, double sigma)
{
    const double density = std::exp(-(x * x) / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * kPi));
    // for sigma < 1/sqrt(2 pi) the density peak exceeds 1
    return std::clamp(1.0 - density, 0.0, 1.0);
}

double vital_dist_rate(double d_dot, double k, double x0) { return 1.0 / (1.0 + std::exp(-k * (d_dot - x0))); }

double degradation_probability(const VitalVector& v)
{
    constexpr double eta = 0.25;
    return eta * (v.v_accel + v.v_dist_rate + v.v_heading_rate + v.v_voltage_rate);
}

double health_raw(double p, bool clamp_p)
{
    const double q = clamp_p ? std::min(p, 0.5) : p;
    auto plogp = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
    const double entropy = -plogp(q) - plogp(1.0 - q);
    return std::clamp(1.0 - entropy, 0.0, 1.0);
}

MonitorState::MonitorState(const VitalParams& params, double dt, bool smooth_distance_rate)
    : params_(params),
      smooth_distance_rate_(smooth_distance_rate),
      health_filter_(FilterKind::LowPass2, params.health_cutoff_hz, dt)
{
    validate(params, dt);
    if (params.input_cutoff_hz > 0) {
        accel_filter_.emplace(FilterKind::LowPass2, params.input_cutoff_hz, dt);
        dist_filter_.emplace(FilterKind::LowPass2, params.input_cutoff_hz, dt);
        voltage_filter_.emplace(FilterKind::LowPass2, params.input_cutoff_hz, dt);
    }
}

double MonitorState::distance_rate(Waypoint position, Waypoint target, double dt)
{
    // previous distance is taken to the current target so waypoint switches
    // do not register as a jump in distance
    const double d = std::hypot(target.x - position.x, target.y - position.y);
    double rate = 0.0;
    if (prev_position_) {
        const double d_prev = std::hypot(target.x - prev_position_->x, target.y - prev_position_->y);
        rate = (d - d_prev) / dt;
    }
    prev_position_ = position;
    return rate;
}

double MonitorState::condition(std::optional<FilterState>& f, double x) { return f ? f->step(x) : x; }

VitalVector MonitorState::compute_vitals(const SensorReading& reading, const ActuatorCommand& cmd, Waypoint target,
                                         double dt)
{
    double d_dot = distance_rate({reading.x_meas, reading.y_meas}, target, dt);
    if (smooth_distance_rate_ && params_.distance_rate_window > 1) {
        distance_rate_window_.push_back(d_dot);
        if (distance_rate_window_.size() > params_.distance_rate_window) {
            distance_rate_window_.pop_front();
        }
        d_dot = std::accumulate(distance_rate_window_.begin(), distance_rate_window_.end(), 0.0) /
                static_cast<double>(distance_rate_window_.size());
    }

    const double v_mean = cmd.mean();
    double voltage_signal = v_mean;
    if (params_.voltage_input == VoltageVitalInput::Rate) {
        voltage_signal = prev_voltage_mean_ ? (v_mean - *prev_voltage_mean_) / dt : 0.0;
    }
    prev_voltage_mean_ = v_mean;

    VitalVector v;
    v.v_accel = vital_gaussian(condition(accel_filter_, reading.accel_x), params_.sigma_accel);
    v.v_dist_rate = vital_dist_rate(condition(dist_filter_, d_dot), params_.k, params_.x0);
    v.v_heading_rate = vital_gaussian(reading.gyro_rate, params_.sigma_heading);
    v.v_voltage_rate = vital_gaussian(condition(voltage_filter_, voltage_signal), params_.sigma_voltage);
    last_vitals_ = v;
    return v;
}

HealthSample MonitorState::step(const SensorReading& reading, const ActuatorCommand& cmd, Waypoint target, double dt)
{
    const VitalVector v = compute_vitals(reading, cmd, target, dt);
    HealthSample h;
    h.p = degradation_probability(v);
    h.h_raw = health_raw(h.p, params_.clamp_p);
    h.h_filtered = health_filter_.step(h.h_raw);
    return h;
}

} // namespace rover
