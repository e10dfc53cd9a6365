#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace rover {

struct FlatTerrain {
    bool operator==(const FlatTerrain&) const = default;
};

/// Plane rising along `azimuth` (rad, from +x toward +y) at angle `slope`.
struct InclineTerrain {
    double slope = 0.0;
    double azimuth = 0.0;
    bool operator==(const InclineTerrain&) const = default;
};

/// h = amplitude * sin(2*pi*(x cos(az) + y sin(az)) / wavelength)
struct SinusoidTerrain {
    double amplitude = 0.0;
    double wavelength = 1.0;
    double azimuth = 0.0;
    bool operator==(const SinusoidTerrain&) const = default;
};

/// Row-major height grid. Row 0 is at y = origin_y (south edge), column 0 at x = origin_x.
struct GridTerrain {
    std::size_t ncols = 0;
    std::size_t nrows = 0;
    double origin_x = 0.0;
    double origin_y = 0.0;
    double cell_size = 1.0;
    std::vector<double> heights;
    std::string source; // file the grid was loaded from, if any

    double at(std::size_t col, std::size_t row) const { return heights[row * ncols + col]; }
    bool operator==(const GridTerrain&) const = default;
};

struct Attitude {
    double phi = 0.0;   // roll
    double theta = 0.0; // pitch
};

/// Immutable surface description; cheap to share between threads.
class Terrain {
public:
    using Kind = std::variant<FlatTerrain, InclineTerrain, SinusoidTerrain, GridTerrain>;

    Terrain() = default;
    explicit Terrain(Kind kind);

    const Kind& kind() const noexcept { return kind_; }

    double height(double x, double y) const;
    std::pair<double, double> gradient(double x, double y) const;

    bool operator==(const Terrain&) const = default;

private:
    Kind kind_ = FlatTerrain{};
};

/// Pitch/roll that the rover adopts when resting on the local surface plane.
/// theta = -atan(slope along body X), phi = atan(slope along body Y), with
/// body Y taken to starboard as in the NED body frame.
Attitude attitude_from_terrain(const Terrain& terrain, double x, double y, double psi);

/// Reads an ESRI ASCII grid. NODATA cells are filled from the nearest valid cell.
/// Throws ParseError with the offending line number.
Terrain load_ascii_grid(const std::filesystem::path& path);
Terrain parse_ascii_grid(const std::string& text, const std::string& source = {});

} // namespace rover
