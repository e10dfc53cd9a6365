#include "doctest.h"

#include <cmath>

#include "rover/errors.hpp"
#include "rover/monitor.hpp"

using namespace rover;

namespace {

// closed-form oracles written independently of the library
double gaussian_oracle(double x, double sigma)
{
    const double pdf = 1.0 / (sigma * std::sqrt(2.0 * M_PI)) * std::exp(-0.5 * (x / sigma) * (x / sigma));
    return std::clamp(1.0 - pdf, 0.0, 1.0);
}

double logistic_oracle(double d, double k, double x0) { return 1.0 / (1.0 + std::exp(-k * (d - x0))); }

double entropy_health_oracle(double p)
{
    double h = 0.0;
    if (p > 0.0) h -= p * std::log(p) / std::log(2.0);
    if (p < 1.0) h -= (1.0 - p) * std::log(1.0 - p) / std::log(2.0);
    return 1.0 - h;
}

} // namespace

TEST_CASE("vital_gaussian oracle values")
{
    CHECK(std::abs(vital_gaussian(0.0, 0.4) - gaussian_oracle(0.0, 0.4)) < 1e-12);
    CHECK(std::abs(vital_gaussian(0.0, 0.4) - 0.0026443) < 1e-6);
    CHECK(std::abs(vital_gaussian(2.0, 0.4) - 0.9999963) < 1e-6);
    CHECK(vital_gaussian(-0.3, 0.4) == vital_gaussian(0.3, 0.4));
    CHECK(std::abs(vital_gaussian(1.0, 0.4) - 0.9562) < 1e-4);
    // narrow sigma: the density peak exceeds 1 and the vital is clamped
    CHECK(vital_gaussian(0.0, 0.1) == 0.0);
}

TEST_CASE("vital_gaussian is even and non-decreasing in |x|")
{
    double prev = vital_gaussian(0.0, 0.4);
    for (double x = 0.01; x < 3.0; x += 0.01) {
        const double v = vital_gaussian(x, 0.4);
        CHECK(v >= prev);
        CHECK(v == vital_gaussian(-x, 0.4));
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        prev = v;
    }
}

TEST_CASE("vital_dist_rate oracle values")
{
    CHECK(std::abs(vital_dist_rate(0.1, 20, 0.1) - 0.5) < 1e-12);
    CHECK(std::abs(vital_dist_rate(-0.25, 20, 0.1) - 1.0 / (1.0 + std::exp(7.0))) < 1e-12);
    CHECK(std::abs(vital_dist_rate(-0.25, 20, 0.1) - 9.11e-4) < 1e-6);
    CHECK(std::abs(vital_dist_rate(0.0, 20, 0.1) - 0.11920) < 1e-5);
    for (double d = -1; d < 1; d += 0.05) {
        CHECK(vital_dist_rate(d, 20, 0.1) == doctest::Approx(logistic_oracle(d, 20, 0.1)).epsilon(1e-12));
    }
}

TEST_CASE("degradation_probability is the mean of the vitals")
{
    CHECK(degradation_probability({0, 0, 0, 0}) == 0.0);
    CHECK(degradation_probability({1, 1, 1, 1}) == 1.0);
    CHECK(degradation_probability({0.2, 0.4, 0.6, 0.8}) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("health_raw oracle values")
{
    CHECK(std::abs(health_raw(0.5, true) - 0.0) < 1e-12);
    CHECK(std::abs(health_raw(0.0, true) - 1.0) < 1e-12);
    CHECK(std::abs(health_raw(1.0, false) - 1.0) < 1e-12);
    CHECK(std::abs(health_raw(0.1, true) - 0.5310) < 1e-4);
    CHECK(std::abs(health_raw(0.1, true) - entropy_health_oracle(0.1)) < 1e-12);
    // symmetric without the clamp, capped at zero with it
    CHECK(health_raw(0.8, false) == doctest::Approx(health_raw(0.2, false)).epsilon(1e-12));
    CHECK(health_raw(0.8, true) == 0.0);
}

TEST_CASE("clamped health is non-increasing in p")
{
    double prev = health_raw(0.0, true);
    for (double p = 0.01; p <= 1.0; p += 0.01) {
        const double h = health_raw(p, true);
        CHECK(h <= prev + 1e-15);
        prev = h;
    }
}

TEST_CASE("distance_rate examples")
{
    const double dt = 0.01;
    MonitorState still(VitalParams{}, dt, false);
    still.distance_rate({1, 1}, {5, 5}, dt);
    CHECK(still.distance_rate({1, 1}, {5, 5}, dt) == 0.0);

    MonitorState radial(VitalParams{}, dt, false);
    CHECK(radial.distance_rate({0, 0}, {10, 0}, dt) == 0.0); // first call has no history
    double rate = 0;
    for (int i = 1; i <= 100; ++i) rate = radial.distance_rate({0.25 * i * dt, 0}, {10, 0}, dt);
    CHECK(std::abs(rate + 0.25) < 1e-9);

    // small steps around a circle of radius 3 about the target
    MonitorState circle(VitalParams{}, dt, false);
    const double omega = 0.25 / 3.0;
    double worst = 0;
    for (int i = 0; i < 200; ++i) {
        const double a = omega * i * dt;
        const double r = circle.distance_rate({3 * std::cos(a), 3 * std::sin(a)}, {0, 0}, dt);
        worst = std::max(worst, std::abs(r));
    }
    CHECK(worst < 1e-6);
}

namespace {

VitalParams unfiltered()
{
    VitalParams p;
    p.input_cutoff_hz = 0.0;
    return p;
}

} // namespace

TEST_CASE("compute_vitals examples")
{
    const double dt = 0.01;
    {
        // nominal cruise: approaching at 0.25 m/s, no rates
        MonitorState ms(unfiltered(), dt, false);
        SensorReading r;
        const ActuatorCommand cmd{3.0, 3.0};
        VitalVector v{};
        for (int i = 0; i < 10; ++i) {
            r.x_meas = 0.25 * i * dt;
            v = ms.compute_vitals(r, cmd, {20, 0}, dt);
        }
        CHECK(v.v_accel < 0.01);
        CHECK(v.v_dist_rate < 0.01);
        CHECK(v.v_heading_rate < 0.01);
        CHECK(v.v_voltage_rate < 0.01);
    }
    {
        MonitorState ms(unfiltered(), dt, false);
        SensorReading r;
        VitalVector v{};
        for (int i = 0; i < 3; ++i) v = ms.compute_vitals(r, {}, {20, 0}, dt);
        CHECK(v.v_accel == doctest::Approx(0.0026).epsilon(0.01));
        CHECK(v.v_dist_rate == doctest::Approx(0.1192).epsilon(1e-3));
        CHECK(v.v_heading_rate == doctest::Approx(0.0026).epsilon(0.01));
        CHECK(v.v_voltage_rate == doctest::Approx(0.0026).epsilon(0.01));
    }
    {
        MonitorState ms(unfiltered(), dt, false);
        SensorReading r;
        r.gyro_rate = 1.0;
        const VitalVector v = ms.compute_vitals(r, {}, {20, 0}, dt);
        CHECK(std::abs(v.v_heading_rate - 0.9562) < 1e-4);
    }
}

TEST_CASE("voltage vital uses the rate of the mean command")
{
    const double dt = 0.01;
    MonitorState ms(unfiltered(), dt, false);
    SensorReading r;
    ms.compute_vitals(r, {2.0, 2.0}, {20, 0}, dt);
    // mean rises by 0.004 V in one step: rate 0.4 V/s
    const VitalVector v = ms.compute_vitals(r, {2.0, 2.008}, {20, 0}, dt);
    CHECK(v.v_voltage_rate == doctest::Approx(gaussian_oracle(0.4, 0.4)).epsilon(1e-9));

    VitalParams level = unfiltered();
    level.voltage_input = VoltageVitalInput::Level;
    MonitorState ml(level, dt, false);
    CHECK(ml.compute_vitals(r, {1.0, 1.0}, {20, 0}, dt).v_voltage_rate ==
          doctest::Approx(gaussian_oracle(1.0, 0.4)).epsilon(1e-9));
}

TEST_CASE("monitor_step filtering")
{
    const double dt = 0.01;
    SensorReading r;
    {
        // first sample initialises the filter
        MonitorState ms(VitalParams{}, dt, false);
        const HealthSample h = monitor_step(ms, r, {}, {20, 0}, dt);
        CHECK(h.h_filtered == h.h_raw);
    }
    {
        // constant inputs: filtered health converges to the raw value
        MonitorState ms(VitalParams{}, dt, false);
        HealthSample h;
        for (int i = 0; i < 2000; ++i) h = monitor_step(ms, r, {}, {20, 0}, dt);
        CHECK(std::abs(h.h_filtered - h.h_raw) < 1e-3);
    }
    {
        // step degradation: monotone fall that never undershoots the new floor
        MonitorState ms(unfiltered(), dt, false);
        for (int i = 0; i < 500; ++i) monitor_step(ms, r, {}, {20, 0}, dt);
        SensorReading bad = r;
        bad.gyro_rate = 0.8;
        double prev = 2.0, floor = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const HealthSample h = monitor_step(ms, bad, {}, {20, 0}, dt);
            floor = h.h_raw;
            CHECK(h.h_filtered <= prev + 1e-12);
            CHECK(h.h_filtered >= floor - 1e-9);
            prev = h.h_filtered;
        }
    }
}

TEST_CASE("vital parameter validation")
{
    VitalParams p;
    p.sigma_heading = 0;
    CHECK_THROWS_AS(validate(p, 0.01), ConfigError);
    VitalParams q;
    q.health_cutoff_hz = 60;
    CHECK_THROWS_AS(validate(q, 0.01), ConfigError);
}
