#pragma once

#include <optional>
#include <string_view>

#include "rover/sim_core.hpp"

namespace rover {

struct ResidualSample {
    double r_psi = 0; // rad, wrapped
    double r_v = 0;   // m/s
    double t = 0;
};

/// Observer output minus measured plant output.
ResidualSample residuals(double psi_observer, double u_observer, double psi_meas, double speed_meas, double t);

enum class Channel { Heading, Velocity };
enum class DetectorKind { Adaptive, Static };

std::string_view to_string(Channel c);
std::string_view to_string(DetectorKind k);

struct ThresholdParams {
    double c = 0.03;          // constant component, residual units
    double k_d = 2.0;         // gain on |highpass(r)|
    double k_l = 1.0;         // gain on (1 - h) |r|
    double static_value = 0;  // fixed comparison threshold
    bool operator==(const ThresholdParams&) const = default;
};

/// Health-informed adaptive threshold:
///   lowpass( c + k_d |highpass(r)| + k_l (1 - h) |r| )
class ThresholdChannel {
public:
    ThresholdChannel(const ThresholdParams& params, double highpass_hz, double lowpass_hz, double dt);

    double step(double r, double health);
    double value() const noexcept { return value_; }
    const ThresholdParams& params() const noexcept { return params_; }

    /// Sum of the three components before smoothing, for a given high-pass output.
    static double pre_filter_sum(const ThresholdParams& p, double hp_out, double r, double health);

private:
    ThresholdParams params_;
    FilterState highpass_;
    FilterState lowpass_;
    double value_;
};

/// Free-function form of ThresholdChannel::step.
inline double adaptive_threshold_step(ThresholdChannel& ch, double r, double health) { return ch.step(r, health); }

/// Configured static threshold; throws ConfigError when the channel has none.
double static_threshold(const ThresholdParams& params, Channel channel);

struct DetectionEvent {
    double t = 0;
    Channel channel = Channel::Heading;
    double residual_value = 0;
    double threshold_value = 0;
    DetectorKind detector = DetectorKind::Adaptive;
};

struct AlarmClear {
    double t = 0;
    Channel channel = Channel::Heading;
    DetectorKind detector = DetectorKind::Adaptive;
};

struct DetectOutcome {
    std::optional<DetectionEvent> raised;
    std::optional<AlarmClear> cleared;
};

/// Debounced two-sided threshold test for one channel of one detector.
class DetectorState {
public:
    explicit DetectorState(int debounce_n = 3);

    DetectOutcome detect(double r, double threshold, Channel channel, DetectorKind kind, double t);

    bool active_alarm() const noexcept { return active_; }
    int consecutive_exceed() const noexcept { return exceed_; }
    int debounce_n() const noexcept { return debounce_; }

private:
    int debounce_;
    int exceed_ = 0;
    int below_ = 0;
    bool active_ = false;
};

} // namespace rover
