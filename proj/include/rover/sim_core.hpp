#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "rover/errors.hpp"

namespace rover {

/// Wraps an angle into [-pi, pi). Throws DomainError for non-finite input.
double wrap_angle(double theta);

/// Fixed-step clock. Time is derived from the step index so it never drifts.
class SimClock {
public:
    explicit SimClock(double dt);

    double dt() const noexcept { return dt_; }
    std::uint64_t step_index() const noexcept { return step_; }
    double t() const noexcept { return static_cast<double>(step_) * dt_; }
    void advance() noexcept { ++step_; }

private:
    double dt_;
    std::uint64_t step_ = 0;
};

/// Classical fourth-order Runge-Kutta step for a fixed-size state.
/// `deriv` is called as deriv(t, state) and must return the same array type.
template <std::size_t N, typename Deriv>
std::array<double, N> rk4_step(const std::array<double, N>& state, Deriv&& deriv, double t, double dt)
{
    auto checked = [&](double tk, const std::array<double, N>& x) {
        std::array<double, N> d = deriv(tk, x);
        for (double v : d) {
            if (!std::isfinite(v)) {
                throw SimulationError(tk, "non-finite derivative");
            }
        }
        return d;
    };
    auto axpy = [](const std::array<double, N>& x, const std::array<double, N>& k, double h) {
        std::array<double, N> out{};
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = x[i] + h * k[i];
        }
        return out;
    };

    const double half = 0.5 * dt;
    const auto k1 = checked(t, state);
    const auto k2 = checked(t + half, axpy(state, k1, half));
    const auto k3 = checked(t + half, axpy(state, k2, half));
    const auto k4 = checked(t + dt, axpy(state, k3, dt));

    std::array<double, N> out{};
    for (std::size_t i = 0; i < N; ++i) {
        out[i] = state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

enum class FilterKind { LowPass1, HighPass1, LowPass2 };

/// Discrete IIR filter obtained from the continuous first/second-order
/// prototype by the bilinear transform with cutoff prewarping.
/// LowPass2 is the critically damped prototype wc^2 / (s + wc)^2.
class FilterState {
public:
    FilterState(FilterKind kind, double cutoff_hz, double dt);

    FilterKind kind() const noexcept { return kind_; }
    double cutoff_hz() const noexcept { return cutoff_hz_; }

    /// Puts the filter in the steady state it would reach for a constant input x.
    void reset(double x);
    bool primed() const noexcept { return primed_; }

    double step(double input);
    double output() const noexcept { return y1_; }

private:
    FilterKind kind_;
    double cutoff_hz_;
    double b0_ = 0, b1_ = 0, b2_ = 0, a1_ = 0, a2_ = 0;
    double x1_ = 0, x2_ = 0, y1_ = 0, y2_ = 0;
    bool primed_ = false;
};

/// One update of the filter. Free-function form of FilterState::step.
inline double filter_step(FilterState& fs, double input) { return fs.step(input); }

/// Seeded Gaussian noise. Equal seeds give bitwise-equal sequences.
class NoiseSource {
public:
    explicit NoiseSource(std::uint64_t seed, bool enabled = true);

    /// Zero-mean sample with standard deviation sigma; returns 0 when disabled.
    /// A draw is consumed either way so enabling/disabling channels never
    /// shifts the stream for later channels.
    double sample(double sigma);
    bool enabled() const noexcept { return enabled_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    bool enabled_;
};

inline constexpr double kPi = std::numbers::pi;
inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

} // namespace rover
