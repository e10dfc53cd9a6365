#include "rover/sim_core.hpp"

#include <string>

namespace rover {

double wrap_angle(double theta)
{
    if (!std::isfinite(theta)) {
        throw DomainError("wrap_angle: non-finite angle");
    }
    if (theta >= -kPi && theta < kPi) {
        return theta;
    }
    constexpr double two_pi = 2.0 * kPi;
    double r = std::fmod(theta + kPi, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    double out = r - kPi;
    // fmod + shift can land exactly on +pi after rounding
    if (out >= kPi) {
        out -= two_pi;
    }
    if (out < -kPi) {
        out = -kPi;
    }
    return out;
}

SimClock::SimClock(double dt) : dt_(dt)
{
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ConfigError("dt", "time step must be positive");
    }
}

FilterState::FilterState(FilterKind kind, double cutoff_hz, double dt) : kind_(kind), cutoff_hz_(cutoff_hz)
{
    if (!(dt > 0.0)) {
        throw ConfigError("dt", "time step must be positive");
    }
    if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 / dt)) {
        throw ConfigError("cutoff", "filter cutoff " + std::to_string(cutoff_hz) +
                                        " Hz must lie in (0, Nyquist=" + std::to_string(0.5 / dt) + " Hz)");
    }
    const double wc = 2.0 * kPi * cutoff_hz;
    const double k = wc / std::tan(wc * dt / 2.0); // prewarped 2/dt
    const double den = k + wc;
    const double pole = (wc - k) / den;

    switch (kind) {
    case FilterKind::LowPass1:
        b0_ = wc / den;
        b1_ = b0_;
        a1_ = pole;
        break;
    case FilterKind::HighPass1:
        b0_ = k / den;
        b1_ = -b0_;
        a1_ = pole;
        break;
    case FilterKind::LowPass2:
        // square of the first-order section
        b0_ = (wc / den) * (wc / den);
        b1_ = 2.0 * b0_;
        b2_ = b0_;
        a1_ = 2.0 * pole;
        a2_ = pole * pole;
        break;
    }
}

void FilterState::reset(double x)
{
    const double y = (kind_ == FilterKind::HighPass1) ? 0.0 : x;
    x1_ = x2_ = x;
    y1_ = y2_ = y;
    primed_ = true;
}

double FilterState::step(double input)
{
    if (!primed_) {
        reset(input);
    }
    const double y = b0_ * input + b1_ * x1_ + b2_ * x2_ - a1_ * y1_ - a2_ * y2_;
    x2_ = x1_;
    x1_ = input;
    y2_ = y1_;
    y1_ = y;
    return y;
}

NoiseSource::NoiseSource(std::uint64_t seed, bool enabled) : engine_(seed), enabled_(enabled) {}

double NoiseSource::sample(double sigma)
{
    const double z = normal_(engine_);
    if (!enabled_ || sigma <= 0.0) {
        return 0.0;
    }
    return sigma * z;
}

} // namespace rover
