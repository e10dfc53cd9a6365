#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rover/gnc.hpp"
#include "rover/scenario.hpp"

namespace rover {

struct PlotFiles {
    std::filesystem::path path;
    std::filesystem::path health;
    std::filesystem::path residual_heading;
    std::filesystem::path residual_velocity;
};

/// Writes path.svg, health.svg, residual_heading.svg and residual_velocity.svg
/// into `outdir`, creating it when absent. Waypoints may be empty.
PlotFiles emit_plots(const std::vector<TelemetryRecord>& records, const std::vector<Waypoint>& waypoints,
                     const std::string& title, const std::filesystem::path& outdir);

} // namespace rover
