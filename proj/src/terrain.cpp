#include "rover/terrain.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rover/errors.hpp"
#include "rover/sim_core.hpp"

namespace rover {

namespace {

void validate_grid(const GridTerrain& g)
{
    if (!(g.cell_size > 0.0)) {
        throw ConfigError("terrain.cell_size", "must be positive");
    }
    if (g.ncols == 0 || g.nrows == 0 || g.heights.size() != g.ncols * g.nrows) {
        throw ConfigError("terrain.heights", "grid is not rectangular");
    }
    for (double h : g.heights) {
        if (!std::isfinite(h)) {
            throw ConfigError("terrain.heights", "non-finite height");
        }
    }
}

// Fractional cell coordinate clamped into the grid extent.
double clamp_index(double v, std::size_t n)
{
    return std::clamp(v, 0.0, static_cast<double>(n - 1));
}

double grid_height(const GridTerrain& g, double x, double y)
{
    const double fx = clamp_index((x - g.origin_x) / g.cell_size, g.ncols);
    const double fy = clamp_index((y - g.origin_y) / g.cell_size, g.nrows);
    const auto c0 = static_cast<std::size_t>(std::floor(fx));
    const auto r0 = static_cast<std::size_t>(std::floor(fy));
    const std::size_t c1 = std::min(c0 + 1, g.ncols - 1);
    const std::size_t r1 = std::min(r0 + 1, g.nrows - 1);
    const double tx = fx - static_cast<double>(c0);
    const double ty = fy - static_cast<double>(r0);
    const double h00 = g.at(c0, r0);
    const double h10 = g.at(c1, r0);
    const double h01 = g.at(c0, r1);
    const double h11 = g.at(c1, r1);
    return (1 - tx) * (1 - ty) * h00 + tx * (1 - ty) * h10 + (1 - tx) * ty * h01 + tx * ty * h11;
}

} // namespace

Terrain::Terrain(Kind kind) : kind_(std::move(kind))
{
    if (auto* g = std::get_if<GridTerrain>(&kind_)) {
        validate_grid(*g);
    } else if (auto* s = std::get_if<SinusoidTerrain>(&kind_)) {
        if (!(s->wavelength > 0.0)) {
            throw ConfigError("terrain.wavelength", "must be positive");
        }
    } else if (auto* i = std::get_if<InclineTerrain>(&kind_)) {
        if (!(std::abs(i->slope) < kPi / 2)) {
            throw ConfigError("terrain.slope", "must be below 90 degrees");
        }
    }
}

double Terrain::height(double x, double y) const
{
    struct Visitor {
        double x, y;
        double operator()(const FlatTerrain&) const { return 0.0; }
        double operator()(const InclineTerrain& t) const
        {
            return std::tan(t.slope) * (x * std::cos(t.azimuth) + y * std::sin(t.azimuth));
        }
        double operator()(const SinusoidTerrain& t) const
        {
            const double s = x * std::cos(t.azimuth) + y * std::sin(t.azimuth);
            return t.amplitude * std::sin(2.0 * kPi * s / t.wavelength);
        }
        double operator()(const GridTerrain& g) const { return grid_height(g, x, y); }
    };
    return std::visit(Visitor{x, y}, kind_);
}

std::pair<double, double> Terrain::gradient(double x, double y) const
{
    struct Visitor {
        double x, y;
        std::pair<double, double> operator()(const FlatTerrain&) const { return {0.0, 0.0}; }
        std::pair<double, double> operator()(const InclineTerrain& t) const
        {
            const double m = std::tan(t.slope);
            return {m * std::cos(t.azimuth), m * std::sin(t.azimuth)};
        }
        std::pair<double, double> operator()(const SinusoidTerrain& t) const
        {
            const double k = 2.0 * kPi / t.wavelength;
            const double s = x * std::cos(t.azimuth) + y * std::sin(t.azimuth);
            const double d = t.amplitude * k * std::cos(k * s);
            return {d * std::cos(t.azimuth), d * std::sin(t.azimuth)};
        }
        std::pair<double, double> operator()(const GridTerrain& g) const
        {
            const double h = g.cell_size;
            return {(grid_height(g, x + h, y) - grid_height(g, x - h, y)) / (2 * h),
                    (grid_height(g, x, y + h) - grid_height(g, x, y - h)) / (2 * h)};
        }
    };
    return std::visit(Visitor{x, y}, kind_);
}

Attitude attitude_from_terrain(const Terrain& terrain, double x, double y, double psi)
{
    const auto [gx, gy] = terrain.gradient(x, y);
    const double c = std::cos(psi);
    const double s = std::sin(psi);
    const double along = gx * c + gy * s;
    const double starboard = gx * s - gy * c;
    // exact zeros on flat ground regardless of psi
    return Attitude{.phi = starboard == 0.0 ? 0.0 : std::atan(starboard),
                    .theta = along == 0.0 ? 0.0 : -std::atan(along)};
}

Terrain parse_ascii_grid(const std::string& text, const std::string& source)
{
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    GridTerrain g;
    g.source = source;
    double nodata = std::numeric_limits<double>::quiet_NaN();
    bool have_nodata = false;
    bool have_cols = false, have_rows = false, have_x = false, have_y = false, have_cell = false;
    bool x_center = false, y_center = false;

    // header
    std::streampos body_start = in.tellg();
    std::size_t body_line = 0;
    while (true) {
        body_start = in.tellg();
        body_line = line_no;
        if (!std::getline(in, line)) {
            break;
        }
        ++line_no;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) {
            continue;
        }
        std::string lower = key;
        std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
        const bool is_key = std::isalpha(static_cast<unsigned char>(lower[0])) != 0;
        if (!is_key) {
            break;
        }
        double value = 0;
        if (!(ls >> value)) {
            throw ParseError(line_no, "header key '" + key + "' has no numeric value");
        }
        if (lower == "ncols") {
            if (value < 1 || value != std::floor(value)) {
                throw ParseError(line_no, "ncols must be a positive integer");
            }
            g.ncols = static_cast<std::size_t>(value);
            have_cols = true;
        } else if (lower == "nrows") {
            if (value < 1 || value != std::floor(value)) {
                throw ParseError(line_no, "nrows must be a positive integer");
            }
            g.nrows = static_cast<std::size_t>(value);
            have_rows = true;
        } else if (lower == "xllcorner" || lower == "xllcenter") {
            g.origin_x = value;
            x_center = lower == "xllcenter";
            have_x = true;
        } else if (lower == "yllcorner" || lower == "yllcenter") {
            g.origin_y = value;
            y_center = lower == "yllcenter";
            have_y = true;
        } else if (lower == "cellsize") {
            if (!(value > 0)) {
                throw ParseError(line_no, "cellsize must be positive");
            }
            g.cell_size = value;
            have_cell = true;
        } else if (lower == "nodata_value") {
            nodata = value;
            have_nodata = true;
        } else {
            throw ParseError(line_no, "unknown header key '" + key + "'");
        }
    }
    if (!(have_cols && have_rows && have_x && have_y && have_cell)) {
        throw ParseError(line_no, "incomplete header (need ncols, nrows, xllcorner, yllcorner, cellsize)");
    }
    // heights are sampled at cell centres
    if (!x_center) {
        g.origin_x += g.cell_size / 2;
    }
    if (!y_center) {
        g.origin_y += g.cell_size / 2;
    }

    in.clear();
    in.seekg(body_start);
    line_no = body_line;
    g.heights.assign(g.ncols * g.nrows, 0.0);
    std::vector<bool> valid(g.heights.size(), true);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tok;
        std::vector<double> vals;
        while (ls >> tok) {
            double v = 0;
            std::size_t used = 0;
            try {
                v = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) {
                throw ParseError(line_no, "non-numeric cell '" + tok + "'");
            }
            vals.push_back(v);
        }
        if (vals.empty()) {
            continue;
        }
        if (row >= g.nrows) {
            throw ParseError(line_no, "more rows than nrows=" + std::to_string(g.nrows));
        }
        if (vals.size() != g.ncols) {
            throw ParseError(line_no, "row " + std::to_string(row + 1) + " has " + std::to_string(vals.size()) +
                                          " values, expected ncols=" + std::to_string(g.ncols));
        }
        // file rows run north to south; grid row 0 is the southern edge
        const std::size_t grid_row = g.nrows - 1 - row;
        for (std::size_t c = 0; c < g.ncols; ++c) {
            const bool missing = have_nodata && vals[c] == nodata;
            valid[grid_row * g.ncols + c] = !missing;
            g.heights[grid_row * g.ncols + c] = vals[c];
        }
        ++row;
    }
    if (row != g.nrows) {
        throw ParseError(line_no, "found " + std::to_string(row) + " rows, expected nrows=" + std::to_string(g.nrows));
    }

    // nearest valid neighbour (Euclidean in cell units, first found wins ties)
    std::vector<std::size_t> valid_idx;
    for (std::size_t i = 0; i < valid.size(); ++i) {
        if (valid[i]) {
            valid_idx.push_back(i);
        }
    }
    if (valid_idx.empty()) {
        throw ParseError(line_no, "grid contains only NODATA cells");
    }
    const auto original = g.heights;
    for (std::size_t i = 0; i < valid.size(); ++i) {
        if (valid[i]) {
            continue;
        }
        const auto ci = static_cast<double>(i % g.ncols), ri = static_cast<double>(i / g.ncols);
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j : valid_idx) {
            const double dc = static_cast<double>(j % g.ncols) - ci;
            const double dr = static_cast<double>(j / g.ncols) - ri;
            const double d2 = dc * dc + dr * dr;
            if (d2 < best) {
                best = d2;
                g.heights[i] = original[j];
            }
        }
    }
    return Terrain(std::move(g));
}

Terrain load_ascii_grid(const std::filesystem::path& path)
{
    std::ifstream f(path);
    if (!f) {
        throw ParseError(0, "cannot open grid file " + path.string());
    }
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_ascii_grid(ss.str(), path.string());
}

} // namespace rover
