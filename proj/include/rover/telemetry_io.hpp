#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "rover/scenario.hpp"

namespace rover {

inline constexpr std::array<std::string_view, 29> kCsvColumns = {
    "t",        "plant_x",   "plant_y",    "plant_psi",    "plant_u",          "obs_x",
    "obs_y",    "obs_psi",   "obs_u",      "psi_meas",     "speed_meas",       "accel_x",
    "v_left",   "v_right",   "vital_ax",   "vital_ddot",   "vital_psidot",     "vital_vdot",
    "p",        "h_raw",     "h",          "r_psi",        "r_v",              "thr_psi_adaptive",
    "thr_v_adaptive", "thr_psi_static", "thr_v_static", "alarm_psi", "alarm_v"};

/// Header plus one row per record; reals in shortest round-trip form, alarms as 0/1.
void write_csv(const std::vector<TelemetryRecord>& records, std::ostream& out);

/// Throws std::runtime_error when the file cannot be written.
void export_csv(const TelemetryLog& log, const std::filesystem::path& path);

/// Inverse of write_csv. Throws ParseError on a malformed header or row.
std::vector<TelemetryRecord> read_csv(std::istream& in);
std::vector<TelemetryRecord> load_csv(const std::filesystem::path& path);

} // namespace rover
