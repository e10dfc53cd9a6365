#include "rover/fdi.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rover/errors.hpp"

namespace rover {

ResidualSample residuals(double psi_observer, double u_observer, double psi_meas, double speed_meas, double t)
{
    if (!std::isfinite(psi_observer) || !std::isfinite(u_observer) || !std::isfinite(psi_meas) ||
        !std::isfinite(speed_meas)) {
        throw DomainError("residuals: non-finite input");
    }
    return {wrap_angle(psi_observer - psi_meas), u_observer - speed_meas, t};
}

std::string_view to_string(Channel c) { return c == Channel::Heading ? "heading" : "velocity"; }
std::string_view to_string(DetectorKind k) { return k == DetectorKind::Adaptive ? "adaptive" : "static"; }

ThresholdChannel::ThresholdChannel(const ThresholdParams& params, double highpass_hz, double lowpass_hz, double dt)
    : params_(params),
      highpass_(FilterKind::HighPass1, highpass_hz, dt),
      lowpass_(FilterKind::LowPass1, lowpass_hz, dt),
      value_(params.c)
{
    if (!(params.c > 0)) {
        throw ConfigError("thresholds.c", "constant component must be positive");
    }
    if (!(params.k_d >= 0) || !(params.k_l >= 0)) {
        throw ConfigError("thresholds.k_d", "gains must be non-negative");
    }
}

double ThresholdChannel::pre_filter_sum(const ThresholdParams& p, double hp_out, double r, double health)
{
    const double th_c = p.c;
    const double th_d = p.k_d * std::abs(hp_out);
    const double th_l = p.k_l * (1.0 - std::clamp(health, 0.0, 1.0)) * std::abs(r);
    return th_c + th_d + th_l;
}

double ThresholdChannel::step(double r, double health)
{
    const double hp = highpass_.step(r);
    const double sum = pre_filter_sum(params_, hp, r, health);
    if (!lowpass_.primed()) {
        lowpass_.reset(sum);
    }
    value_ = std::max(0.0, lowpass_.step(sum));
    return value_;
}

double static_threshold(const ThresholdParams& params, Channel channel)
{
    if (!(params.static_value > 0)) {
        throw ConfigError(std::string("thresholds.") + std::string(to_string(channel)) + ".static",
                          "static threshold not configured");
    }
    return params.static_value;
}

DetectorState::DetectorState(int debounce_n) : debounce_(debounce_n)
{
    if (debounce_n < 1) {
        throw ConfigError("thresholds.debounce", "must be at least 1");
    }
}

DetectOutcome DetectorState::detect(double r, double threshold, Channel channel, DetectorKind kind, double t)
{
    DetectOutcome out;
    if (std::abs(r) > threshold) {
        ++exceed_;
        below_ = 0;
        if (!active_ && exceed_ >= debounce_) {
            active_ = true;
            out.raised = DetectionEvent{t, channel, r, threshold, kind};
        }
    } else {
        exceed_ = 0;
        ++below_;
        if (active_ && below_ >= debounce_) {
            active_ = false;
            out.cleared = AlarmClear{t, channel, kind};
        }
    }
    return out;
}

} // namespace rover
