#include "rover/plots.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace rover {

namespace {

constexpr double kWidth = 900, kHeight = 420;
constexpr double kLeft = 80, kRight = 170, kTop = 40, kBottom = 60;
constexpr std::size_t kMaxPoints = 3000;

struct Series {
    std::string label;
    std::string colour;
    std::vector<double> x, y;
    bool dashed = false;
};

struct Band {
    double x0, x1;
};

struct Chart {
    std::string title, x_label, y_label;
    std::vector<Series> series;
    std::vector<Band> shading;
    std::vector<Waypoint> markers;
    bool equal_aspect = false;
};

std::string fmt(double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 6);
    return {buf, res.ptr};
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Keeps the first, min, max and last sample of each bucket so spikes survive.
std::vector<std::size_t> decimate(const std::vector<double>& y)
{
    const std::size_t n = y.size();
    std::vector<std::size_t> idx;
    if (n <= kMaxPoints) {
        idx.resize(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        return idx;
    }
    const std::size_t bucket = (n + kMaxPoints / 4 - 1) / (kMaxPoints / 4);
    for (std::size_t b = 0; b < n; b += bucket) {
        const std::size_t e = std::min(n, b + bucket);
        std::size_t lo = b, hi = b;
        for (std::size_t i = b; i < e; ++i) {
            if (y[i] < y[lo]) lo = i;
            if (y[i] > y[hi]) hi = i;
        }
        std::size_t picks[4] = {b, std::min(lo, hi), std::max(lo, hi), e - 1};
        for (std::size_t p : picks) {
            if (idx.empty() || idx.back() < p) idx.push_back(p);
        }
    }
    return idx;
}

std::vector<double> nice_ticks(double lo, double hi)
{
    const double span = hi - lo;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        step = m * mag;
        if (step >= raw) break;
    }
    std::vector<double> ticks;
    for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) {
        ticks.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
    }
    return ticks;
}

void range_of(const std::vector<double>& v, double& lo, double& hi)
{
    for (double d : v) {
        if (std::isfinite(d)) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    }
}

void pad(double& lo, double& hi)
{
    if (!(lo <= hi)) {
        lo = 0;
        hi = 1;
    }
    if (hi - lo < 1e-9) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double m = 0.05 * (hi - lo);
    lo -= m;
    hi += m;
}

std::string render(const Chart& c)
{
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : c.series) {
        range_of(s.x, xlo, xhi);
        range_of(s.y, ylo, yhi);
    }
    for (const auto& m : c.markers) {
        xlo = std::min(xlo, m.x);
        xhi = std::max(xhi, m.x);
        ylo = std::min(ylo, m.y);
        yhi = std::max(yhi, m.y);
    }
    pad(xlo, xhi);
    pad(ylo, yhi);

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    if (c.equal_aspect) {
        // widen whichever axis is short so one metre is the same length on both
        const double scale = std::max((xhi - xlo) / pw, (yhi - ylo) / ph);
        const double cx = 0.5 * (xlo + xhi), cy = 0.5 * (ylo + yhi);
        xlo = cx - 0.5 * scale * pw;
        xhi = cx + 0.5 * scale * pw;
        ylo = cy - 0.5 * scale * ph;
        yhi = cy + 0.5 * scale * ph;
    }
    auto sx = [&](double x) { return kLeft + (x - xlo) / (xhi - xlo) * pw; };
    auto sy = [&](double y) { return kTop + (yhi - y) / (yhi - ylo) * ph; };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(c.title)
      << "</text>\n";

    for (const auto& b : c.shading) {
        const double a = std::clamp(sx(b.x0), kLeft, kLeft + pw);
        const double e = std::clamp(sx(b.x1), kLeft, kLeft + pw);
        o << "<rect class=\"alarm\" x=\"" << fmt(a) << "\" y=\"" << kTop << "\" width=\"" << fmt(std::max(e - a, 1.0))
          << "\" height=\"" << ph << "\" fill=\"#f4a6a6\" fill-opacity=\"0.45\"/>\n";
    }

    o << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    const auto xt = nice_ticks(xlo, xhi);
    const auto yt = nice_ticks(ylo, yhi);
    for (double t : xt) o << "<line x1=\"" << fmt(sx(t)) << "\" y1=\"" << kTop << "\" x2=\"" << fmt(sx(t)) << "\" y2=\"" << kTop + ph << "\"/>\n";
    for (double t : yt) o << "<line x1=\"" << kLeft << "\" y1=\"" << fmt(sy(t)) << "\" x2=\"" << kLeft + pw << "\" y2=\"" << fmt(sy(t)) << "\"/>\n";
    o << "</g>\n";
    o << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (double t : xt) {
        o << "<text x=\"" << fmt(sx(t)) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">" << fmt(t)
          << "</text>\n";
    }
    for (double t : yt) {
        o << "<text x=\"" << kLeft - 6 << "\" y=\"" << fmt(sy(t) + 4) << "\" text-anchor=\"end\">" << fmt(t)
          << "</text>\n";
    }
    o << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 18 << "\" text-anchor=\"middle\">"
      << escape(c.x_label) << "</text>\n";
    o << "<text transform=\"translate(20," << kTop + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(c.y_label) << "</text>\n";

    o << "<g fill=\"none\" stroke-width=\"1.4\">\n";
    for (const auto& s : c.series) {
        const auto idx = decimate(s.y);
        o << "<polyline stroke=\"" << s.colour << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
        for (std::size_t i : idx) {
            o << fmt(sx(s.x[i])) << ',' << fmt(sy(s.y[i])) << ' ';
        }
        o << "\"/>\n";
    }
    o << "</g>\n";

    for (std::size_t i = 0; i < c.markers.size(); ++i) {
        const auto& m = c.markers[i];
        o << "<circle cx=\"" << fmt(sx(m.x)) << "\" cy=\"" << fmt(sy(m.y))
          << "\" r=\"5\" fill=\"none\" stroke=\"#2a9d2a\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << fmt(sx(m.x) + 7) << "\" y=\"" << fmt(sy(m.y) - 7) << "\" fill=\"#2a9d2a\">WP" << i + 1
          << "</text>\n";
    }

    // legend
    double ly = kTop + 10;
    const double lx = kLeft + pw + 15;
    for (const auto& s : c.series) {
        o << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 24 << "\" y2=\"" << ly << "\" stroke=\""
          << s.colour << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        o << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">" << escape(s.label) << "</text>\n";
        ly += 18;
    }
    if (!c.shading.empty()) {
        o << "<rect x=\"" << lx << "\" y=\"" << ly - 6 << "\" width=\"24\" height=\"12\" fill=\"#f4a6a6\"/>\n";
        o << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">alarm</text>\n";
        ly += 18;
    }
    if (!c.markers.empty()) {
        o << "<circle cx=\"" << lx + 12 << "\" cy=\"" << ly << "\" r=\"5\" fill=\"none\" stroke=\"#2a9d2a\" stroke-width=\"2\"/>\n";
        o << "<text x=\"" << lx + 30 << "\" y=\"" << ly + 4 << "\">waypoint</text>\n";
    }
    o << "</svg>\n";
    return o.str();
}

std::vector<Band> alarm_bands(const std::vector<TelemetryRecord>& recs, bool TelemetryRecord::*flag)
{
    std::vector<Band> out;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (!(recs[i].*flag)) continue;
        const std::size_t start = i;
        while (i + 1 < recs.size() && recs[i + 1].*flag) ++i;
        const double end = i + 1 < recs.size() ? recs[i + 1].t : recs[i].t;
        out.push_back({recs[start].t, end});
    }
    return out;
}

std::vector<double> column(const std::vector<TelemetryRecord>& recs, double TelemetryRecord::*field, double scale = 1.0)
{
    std::vector<double> v;
    v.reserve(recs.size());
    for (const auto& r : recs) v.push_back(scale * (r.*field));
    return v;
}

void write_file(const std::filesystem::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + p.string());
}

Chart residual_chart(const std::vector<TelemetryRecord>& recs, const std::string& title, const char* name,
                     const char* unit, double scale, double TelemetryRecord::*r, double TelemetryRecord::*adaptive,
                     double TelemetryRecord::*fixed, bool TelemetryRecord::*alarm)
{
    const auto t = column(recs, &TelemetryRecord::t);
    Chart c{title + ": " + name + " residual", "time [s]", std::string(name) + " residual [" + unit + "]", {}, {}, {}, false};
    const auto thr = column(recs, adaptive, scale);
    std::vector<double> neg(thr.size());
    std::transform(thr.begin(), thr.end(), neg.begin(), [](double v) { return -v; });
    const auto st = column(recs, fixed, scale);
    std::vector<double> st_neg(st.size());
    std::transform(st.begin(), st.end(), st_neg.begin(), [](double v) { return -v; });
    c.series.push_back({"residual", "#1f4e9c", t, column(recs, r, scale), false});
    c.series.push_back({"adaptive +", "#d62828", t, thr, false});
    c.series.push_back({"adaptive -", "#f08c2e", t, neg, false});
    c.series.push_back({"static +", "#555555", t, st, true});
    c.series.push_back({"static -", "#999999", t, st_neg, true});
    c.shading = alarm_bands(recs, alarm);
    return c;
}

} // namespace

PlotFiles emit_plots(const std::vector<TelemetryRecord>& recs, const std::vector<Waypoint>& waypoints,
                     const std::string& title, const std::filesystem::path& outdir)
{
    if (recs.empty()) throw std::invalid_argument("cannot plot an empty telemetry log");
    std::filesystem::create_directories(outdir);
    PlotFiles files{outdir / "path.svg", outdir / "health.svg", outdir / "residual_heading.svg",
                    outdir / "residual_velocity.svg"};

    Chart path{title + ": path", "x [m]", "y [m]", {}, {}, waypoints, true};
    path.series.push_back(
        {"observer", "#2a9d2a", column(recs, &TelemetryRecord::obs_x), column(recs, &TelemetryRecord::obs_y), true});
    path.series.push_back(
        {"plant", "#1f4e9c", column(recs, &TelemetryRecord::plant_x), column(recs, &TelemetryRecord::plant_y), false});
    write_file(files.path, render(path));

    const auto t = column(recs, &TelemetryRecord::t);
    Chart health{title + ": health", "time [s]", "health H [-]", {}, {}, {}, false};
    health.series.push_back({"H raw", "#9db4d9", t, column(recs, &TelemetryRecord::h_raw), false});
    health.series.push_back({"H filtered", "#1f4e9c", t, column(recs, &TelemetryRecord::h), false});
    health.series.push_back({"P", "#d62828", t, column(recs, &TelemetryRecord::p), true});
    write_file(files.health, render(health));

    write_file(files.residual_heading,
               render(residual_chart(recs, title, "heading", "deg", 180.0 / kPi, &TelemetryRecord::r_psi,
                                     &TelemetryRecord::thr_psi_adaptive, &TelemetryRecord::thr_psi_static,
                                     &TelemetryRecord::alarm_psi)));
    write_file(files.residual_velocity,
               render(residual_chart(recs, title, "velocity", "m/s", 1.0, &TelemetryRecord::r_v,
                                     &TelemetryRecord::thr_v_adaptive, &TelemetryRecord::thr_v_static,
                                     &TelemetryRecord::alarm_v)));
    return files;
}

} // namespace rover
