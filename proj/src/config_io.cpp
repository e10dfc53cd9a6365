#include "rover/config_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rover/errors.hpp"

namespace rover {

namespace {

using Json = nlohmann::ordered_json;

// ---- writing ----

Json gains_json(const PidGains& g)
{
    return Json{{"kp", g.kp}, {"ki", g.ki}, {"kd", g.kd}, {"output_limit", g.output_limit},
                {"integral_limit", g.integral_limit}};
}

Json threshold_json(const ThresholdParams& p)
{
    return Json{{"c", p.c}, {"k_d", p.k_d}, {"k_l", p.k_l}, {"static", p.static_value}};
}

Json terrain_json(const Terrain& terrain)
{
    return std::visit(
        [](const auto& k) -> Json {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, FlatTerrain>) {
                return Json{{"type", "flat"}};
            } else if constexpr (std::is_same_v<T, InclineTerrain>) {
                return Json{{"type", "incline"}, {"slope", k.slope}, {"azimuth", k.azimuth}};
            } else if constexpr (std::is_same_v<T, SinusoidTerrain>) {
                return Json{{"type", "sinusoid"},
                            {"amplitude", k.amplitude},
                            {"wavelength", k.wavelength},
                            {"azimuth", k.azimuth}};
            } else {
                if (!k.source.empty()) {
                    return Json{{"type", "grid"}, {"path", k.source}};
                }
                return Json{{"type", "grid"},         {"ncols", k.ncols},         {"nrows", k.nrows},
                            {"origin_x", k.origin_x}, {"origin_y", k.origin_y}, {"cell_size", k.cell_size},
                            {"heights", k.heights}};
            }
        },
        terrain.kind());
}

// Degrees are the user-facing unit for the gyro offset. Emit a degree value
// that converts back to exactly `rad`, or radians when none is nearby.
void put_offset(Json& j, double rad)
{
    double d = rad_to_deg(rad);
    for (int i = 0; i < 16; ++i) {
        if (deg_to_rad(d) == rad) {
            j["offset_deg"] = d;
            return;
        }
        d = std::nextafter(d, deg_to_rad(d) < rad ? INFINITY : -INFINITY);
    }
    j["offset_rad"] = rad;
}

Json to_json(const ScenarioConfig& c)
{
    Json j;
    j["name"] = c.name;
    j["duration"] = c.duration;
    j["dt"] = c.dt;
    j["observer_mode"] = c.observer_mode == ObserverMode::Independent ? "independent" : "shared_command";
    j["terrain"] = terrain_json(c.terrain);

    Json wps = Json::array();
    for (const auto& w : c.mission.waypoints) {
        wps.push_back(Json::array({w.x, w.y}));
    }
    j["mission"] = Json{{"waypoints", wps},
                        {"acceptance_radius", c.mission.acceptance_radius},
                        {"cruise_speed", c.mission.cruise_speed}};
    j["start"] = Json{{"x", c.start.x}, {"y", c.start.y}, {"psi", c.start.psi}};

    const RoverParams& r = c.rover;
    j["rover"] = Json{{"mass", r.mass},
                      {"yaw_inertia", r.yaw_inertia},
                      {"surge_damping", r.surge_damping},
                      {"sway_damping", r.sway_damping},
                      {"yaw_damping", r.yaw_damping},
                      {"length", r.length},
                      {"track_width", r.track_width},
                      {"wheel_radius", r.wheel_radius},
                      {"motor",
                       {{"torque_constant", r.motor.torque_constant},
                        {"back_emf_constant", r.motor.back_emf_constant},
                        {"max_voltage", r.motor.max_voltage}}},
                      {"rolling_resistance_coeff", r.rolling_resistance_coeff},
                      {"drag_coeff_failed_wheel", r.drag_coeff_failed_wheel},
                      {"gravity", r.gravity}};

    j["gains"] = Json{{"heading", gains_json(c.gains.heading)}, {"velocity", gains_json(c.gains.velocity)}};

    const VitalParams& v = c.vitals;
    j["vitals"] = Json{{"sigma_accel", v.sigma_accel},
                       {"sigma_heading", v.sigma_heading},
                       {"sigma_voltage", v.sigma_voltage},
                       {"k", v.k},
                       {"x0", v.x0},
                       {"voltage_input", v.voltage_input == VoltageVitalInput::Rate ? "rate" : "level"},
                       {"clamp_p", v.clamp_p},
                       {"distance_rate_window", v.distance_rate_window},
                       {"input_cutoff_hz", v.input_cutoff_hz},
                       {"health_cutoff_hz", v.health_cutoff_hz}};

    j["thresholds"] = Json{{"heading", threshold_json(c.thresholds.heading)},
                           {"velocity", threshold_json(c.thresholds.velocity)},
                           {"highpass_hz", c.thresholds.highpass_hz},
                           {"lowpass_hz", c.thresholds.lowpass_hz},
                           {"debounce", c.thresholds.debounce}};

    Json faults = Json::array();
    if (c.faults.gyro_offset) {
        Json f{{"type", "gyro_offset"}};
        put_offset(f, c.faults.gyro_offset->offset);
        f["t_inject"] = c.faults.gyro_offset->t_inject;
        faults.push_back(f);
    }
    if (c.faults.motor_failure) {
        faults.push_back(Json{{"type", "motor_failure"},
                              {"wheel", c.faults.motor_failure->wheel_index},
                              {"t_inject", c.faults.motor_failure->t_inject}});
    }
    j["faults"] = faults;

    const SensorNoise& s = c.noise.sigma;
    j["noise"] = Json{{"enabled", c.noise.enabled},
                      {"seed", c.noise.seed},
                      {"sigma",
                       {{"heading", s.heading},
                        {"gyro", s.gyro},
                        {"accel", s.accel},
                        {"speed", s.speed},
                        {"position", s.position}}}};
    return j;
}

// ---- reading ----

class Reader {
public:
    explicit Reader(std::filesystem::path base_dir) : base_dir_(std::move(base_dir)) {}

    ScenarioConfig read(const Json& j)
    {
        keys(j, "", {"name", "duration", "dt", "observer_mode", "terrain", "mission", "start", "rover", "gains",
                     "vitals", "thresholds", "faults", "noise"});
        ScenarioConfig c;
        c.name = str(j, "", "name", c.name);
        c.duration = num(j, "", "duration", c.duration);
        c.dt = num(j, "", "dt", c.dt);
        if (j.contains("observer_mode")) {
            const std::string m = str(j, "", "observer_mode", "");
            if (m == "independent") {
                c.observer_mode = ObserverMode::Independent;
            } else if (m == "shared_command") {
                c.observer_mode = ObserverMode::SharedCommand;
            } else {
                throw ConfigError("observer_mode", "expected \"independent\" or \"shared_command\", got \"" + m + "\"");
            }
        }
        if (j.contains("terrain")) c.terrain = terrain(j["terrain"], "terrain");
        if (j.contains("mission")) c.mission = mission(j["mission"], "mission");
        if (j.contains("start")) {
            const Json& s = j["start"];
            keys(s, "start", {"x", "y", "psi"});
            c.start.x = num(s, "start", "x", 0.0);
            c.start.y = num(s, "start", "y", 0.0);
            c.start.psi = num(s, "start", "psi", 0.0);
        }
        if (j.contains("rover")) c.rover = rover(j["rover"], "rover");
        if (j.contains("gains")) {
            const Json& g = j["gains"];
            keys(g, "gains", {"heading", "velocity"});
            if (g.contains("heading")) c.gains.heading = gains(g["heading"], "gains.heading", c.gains.heading);
            if (g.contains("velocity")) c.gains.velocity = gains(g["velocity"], "gains.velocity", c.gains.velocity);
        }
        if (j.contains("vitals")) c.vitals = vitals(j["vitals"], "vitals");
        if (j.contains("thresholds")) c.thresholds = thresholds(j["thresholds"], "thresholds");
        if (j.contains("faults")) c.faults = faults(j["faults"], "faults");
        if (j.contains("noise")) c.noise = noise(j["noise"], "noise");
        validate(c);
        return c;
    }

private:
    static std::string join(const std::string& path, const std::string& key)
    {
        return path.empty() ? key : path + "." + key;
    }

    static void keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed)
    {
        if (!j.is_object()) {
            throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
        }
        for (const auto& [k, _] : j.items()) {
            bool ok = false;
            for (const char* a : allowed) {
                ok = ok || k == a;
            }
            if (!ok) throw ConfigError(join(path, k), "unknown key");
        }
    }

    static double num(const Json& j, const std::string& path, const char* key, double fallback)
    {
        if (!j.contains(key)) return fallback;
        const Json& v = j[key];
        if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
        const double d = v.get<double>();
        if (!std::isfinite(d)) throw ConfigError(join(path, key), "must be finite");
        return d;
    }

    static std::int64_t integer(const Json& j, const std::string& path, const char* key, std::int64_t fallback)
    {
        if (!j.contains(key)) return fallback;
        const Json& v = j[key];
        if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
        return v.get<std::int64_t>();
    }

    static bool boolean(const Json& j, const std::string& path, const char* key, bool fallback)
    {
        if (!j.contains(key)) return fallback;
        if (!j[key].is_boolean()) throw ConfigError(join(path, key), "expected true or false");
        return j[key].get<bool>();
    }

    static std::string str(const Json& j, const std::string& path, const char* key, const std::string& fallback)
    {
        if (!j.contains(key)) return fallback;
        if (!j[key].is_string()) throw ConfigError(join(path, key), "expected a string");
        return j[key].get<std::string>();
    }

    Terrain terrain(const Json& j, const std::string& path) const
    {
        if (!j.is_object()) throw ConfigError(path, "expected an object");
        const std::string type = str(j, path, "type", "");
        if (type == "flat") {
            keys(j, path, {"type"});
            return Terrain{};
        }
        if (type == "incline") {
            keys(j, path, {"type", "slope", "azimuth"});
            return Terrain(InclineTerrain{num(j, path, "slope", 0.0), num(j, path, "azimuth", 0.0)});
        }
        if (type == "sinusoid") {
            keys(j, path, {"type", "amplitude", "wavelength", "azimuth"});
            return Terrain(SinusoidTerrain{num(j, path, "amplitude", 0.0), num(j, path, "wavelength", 1.0),
                                           num(j, path, "azimuth", 0.0)});
        }
        if (type == "grid") {
            if (j.contains("path")) {
                keys(j, path, {"type", "path"});
                std::filesystem::path p = str(j, path, "path", "");
                if (p.is_relative() && !base_dir_.empty()) p = base_dir_ / p;
                return load_ascii_grid(p);
            }
            keys(j, path, {"type", "ncols", "nrows", "origin_x", "origin_y", "cell_size", "heights"});
            GridTerrain g;
            const auto ncols = integer(j, path, "ncols", 0);
            const auto nrows = integer(j, path, "nrows", 0);
            if (ncols < 2) throw ConfigError(join(path, "ncols"), "must be at least 2");
            if (nrows < 2) throw ConfigError(join(path, "nrows"), "must be at least 2");
            g.ncols = static_cast<std::size_t>(ncols);
            g.nrows = static_cast<std::size_t>(nrows);
            g.origin_x = num(j, path, "origin_x", 0.0);
            g.origin_y = num(j, path, "origin_y", 0.0);
            g.cell_size = num(j, path, "cell_size", 1.0);
            if (!j.contains("heights") || !j["heights"].is_array()) {
                throw ConfigError(join(path, "heights"), "expected an array of numbers");
            }
            for (const auto& h : j["heights"]) {
                if (!h.is_number()) throw ConfigError(join(path, "heights"), "expected an array of numbers");
                g.heights.push_back(h.get<double>());
            }
            return Terrain(std::move(g));
        }
        throw ConfigError(join(path, "type"), "expected one of flat, incline, sinusoid, grid");
    }

    static Mission mission(const Json& j, const std::string& path)
    {
        keys(j, path, {"waypoints", "acceptance_radius", "cruise_speed"});
        Mission m;
        if (j.contains("waypoints")) {
            const Json& wps = j["waypoints"];
            if (!wps.is_array()) throw ConfigError(join(path, "waypoints"), "expected an array");
            for (std::size_t i = 0; i < wps.size(); ++i) {
                const std::string wp_path = join(path, "waypoints") + "[" + std::to_string(i) + "]";
                const Json& w = wps[i];
                if (w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number()) {
                    m.waypoints.push_back({w[0].get<double>(), w[1].get<double>()});
                } else if (w.is_object()) {
                    keys(w, wp_path, {"x", "y"});
                    m.waypoints.push_back({num(w, wp_path, "x", 0.0), num(w, wp_path, "y", 0.0)});
                } else {
                    throw ConfigError(wp_path, "expected [x, y] or {\"x\": .., \"y\": ..}");
                }
            }
        }
        m.acceptance_radius = num(j, path, "acceptance_radius", m.acceptance_radius);
        m.cruise_speed = num(j, path, "cruise_speed", m.cruise_speed);
        return m;
    }

    static RoverParams rover(const Json& j, const std::string& path)
    {
        keys(j, path, {"mass", "yaw_inertia", "surge_damping", "sway_damping", "yaw_damping", "length",
                       "track_width", "wheel_radius", "motor", "rolling_resistance_coeff", "drag_coeff_failed_wheel",
                       "gravity"});
        RoverParams r;
        r.mass = num(j, path, "mass", r.mass);
        r.yaw_inertia = num(j, path, "yaw_inertia", r.yaw_inertia);
        r.surge_damping = num(j, path, "surge_damping", r.surge_damping);
        r.sway_damping = num(j, path, "sway_damping", r.sway_damping);
        r.yaw_damping = num(j, path, "yaw_damping", r.yaw_damping);
        r.length = num(j, path, "length", r.length);
        r.track_width = num(j, path, "track_width", r.track_width);
        r.wheel_radius = num(j, path, "wheel_radius", r.wheel_radius);
        if (j.contains("motor")) {
            const Json& m = j["motor"];
            const std::string mp = join(path, "motor");
            keys(m, mp, {"torque_constant", "back_emf_constant", "max_voltage"});
            r.motor.torque_constant = num(m, mp, "torque_constant", r.motor.torque_constant);
            r.motor.back_emf_constant = num(m, mp, "back_emf_constant", r.motor.back_emf_constant);
            r.motor.max_voltage = num(m, mp, "max_voltage", r.motor.max_voltage);
        }
        r.rolling_resistance_coeff = num(j, path, "rolling_resistance_coeff", r.rolling_resistance_coeff);
        r.drag_coeff_failed_wheel = num(j, path, "drag_coeff_failed_wheel", r.drag_coeff_failed_wheel);
        r.gravity = num(j, path, "gravity", r.gravity);
        return r;
    }

    static PidGains gains(const Json& j, const std::string& path, PidGains g)
    {
        keys(j, path, {"kp", "ki", "kd", "output_limit", "integral_limit"});
        g.kp = num(j, path, "kp", g.kp);
        g.ki = num(j, path, "ki", g.ki);
        g.kd = num(j, path, "kd", g.kd);
        g.output_limit = num(j, path, "output_limit", g.output_limit);
        g.integral_limit = num(j, path, "integral_limit", g.integral_limit);
        return g;
    }

    static VitalParams vitals(const Json& j, const std::string& path)
    {
        keys(j, path, {"sigma_accel", "sigma_heading", "sigma_voltage", "k", "x0", "voltage_input", "clamp_p",
                       "distance_rate_window", "input_cutoff_hz", "health_cutoff_hz"});
        VitalParams v;
        v.sigma_accel = num(j, path, "sigma_accel", v.sigma_accel);
        v.sigma_heading = num(j, path, "sigma_heading", v.sigma_heading);
        v.sigma_voltage = num(j, path, "sigma_voltage", v.sigma_voltage);
        v.k = num(j, path, "k", v.k);
        v.x0 = num(j, path, "x0", v.x0);
        if (j.contains("voltage_input")) {
            const std::string s = str(j, path, "voltage_input", "");
            if (s == "rate") {
                v.voltage_input = VoltageVitalInput::Rate;
            } else if (s == "level") {
                v.voltage_input = VoltageVitalInput::Level;
            } else {
                throw ConfigError(join(path, "voltage_input"), "expected \"rate\" or \"level\"");
            }
        }
        v.clamp_p = boolean(j, path, "clamp_p", v.clamp_p);
        const auto window = integer(j, path, "distance_rate_window", static_cast<std::int64_t>(v.distance_rate_window));
        if (window < 1) throw ConfigError(join(path, "distance_rate_window"), "must be at least 1");
        v.distance_rate_window = static_cast<std::size_t>(window);
        v.input_cutoff_hz = num(j, path, "input_cutoff_hz", v.input_cutoff_hz);
        v.health_cutoff_hz = num(j, path, "health_cutoff_hz", v.health_cutoff_hz);
        return v;
    }

    static ThresholdParams threshold(const Json& j, const std::string& path, ThresholdParams p)
    {
        keys(j, path, {"c", "k_d", "k_l", "static"});
        p.c = num(j, path, "c", p.c);
        p.k_d = num(j, path, "k_d", p.k_d);
        p.k_l = num(j, path, "k_l", p.k_l);
        p.static_value = num(j, path, "static", p.static_value);
        return p;
    }

    static ThresholdConfig thresholds(const Json& j, const std::string& path)
    {
        keys(j, path, {"heading", "velocity", "highpass_hz", "lowpass_hz", "debounce"});
        ThresholdConfig t;
        if (j.contains("heading")) t.heading = threshold(j["heading"], join(path, "heading"), t.heading);
        if (j.contains("velocity")) t.velocity = threshold(j["velocity"], join(path, "velocity"), t.velocity);
        t.highpass_hz = num(j, path, "highpass_hz", t.highpass_hz);
        t.lowpass_hz = num(j, path, "lowpass_hz", t.lowpass_hz);
        const auto n = integer(j, path, "debounce", t.debounce);
        if (n < 1 || n > 1000000) throw ConfigError(join(path, "debounce"), "must be at least 1");
        t.debounce = static_cast<int>(n);
        return t;
    }

    static FaultSet faults(const Json& j, const std::string& path)
    {
        if (!j.is_array()) throw ConfigError(path, "expected an array");
        FaultSet f;
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string fp = path + "[" + std::to_string(i) + "]";
            const Json& e = j[i];
            if (!e.is_object()) throw ConfigError(fp, "expected an object");
            const std::string type = str(e, fp, "type", "");
            if (type == "gyro_offset") {
                keys(e, fp, {"type", "offset_deg", "offset_rad", "t_inject"});
                if (f.gyro_offset) throw ConfigError(fp, "only one gyro_offset fault is supported");
                if (e.contains("offset_deg") == e.contains("offset_rad")) {
                    throw ConfigError(join(fp, "offset_deg"), "give exactly one of offset_deg, offset_rad");
                }
                const double offset = e.contains("offset_deg") ? deg_to_rad(num(e, fp, "offset_deg", 0.0))
                                                               : num(e, fp, "offset_rad", 0.0);
                f.gyro_offset = GyroOffsetFault{offset, num(e, fp, "t_inject", 0.0)};
            } else if (type == "motor_failure") {
                keys(e, fp, {"type", "wheel", "t_inject"});
                if (f.motor_failure) throw ConfigError(fp, "only one motor_failure fault is supported");
                const auto wheel = integer(e, fp, "wheel", 0);
                if (wheel < 0 || wheel >= static_cast<std::int64_t>(kWheelCount)) {
                    throw ConfigError(join(fp, "wheel"), "wheel index must be in [0, 5]");
                }
                f.motor_failure = MotorFailureFault{static_cast<int>(wheel), num(e, fp, "t_inject", 0.0)};
            } else {
                throw ConfigError(join(fp, "type"), "expected \"gyro_offset\" or \"motor_failure\"");
            }
        }
        return f;
    }

    static NoiseConfig noise(const Json& j, const std::string& path)
    {
        keys(j, path, {"enabled", "seed", "sigma"});
        NoiseConfig n;
        n.enabled = boolean(j, path, "enabled", n.enabled);
        if (j.contains("seed")) {
            if (!j["seed"].is_number_unsigned()) throw ConfigError(join(path, "seed"), "expected a non-negative integer");
            n.seed = j["seed"].get<std::uint64_t>();
        }
        if (j.contains("sigma")) {
            const Json& s = j["sigma"];
            const std::string sp = join(path, "sigma");
            keys(s, sp, {"heading", "gyro", "accel", "speed", "position"});
            n.sigma.heading = num(s, sp, "heading", n.sigma.heading);
            n.sigma.gyro = num(s, sp, "gyro", n.sigma.gyro);
            n.sigma.accel = num(s, sp, "accel", n.sigma.accel);
            n.sigma.speed = num(s, sp, "speed", n.sigma.speed);
            n.sigma.position = num(s, sp, "position", n.sigma.position);
        }
        return n;
    }

    std::filesystem::path base_dir_;
};

// "a.b[2].c" -> {"a", "b", 2, "c"}
struct PathPart {
    std::string key;
    bool is_index = false;
    std::size_t index = 0;
};

std::vector<PathPart> split_path(const std::string& path)
{
    std::vector<PathPart> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        if (path[i] == '.') {
            ++i;
            continue;
        }
        if (path[i] == '[') {
            const auto close = path.find(']', i);
            if (close == std::string::npos) throw ConfigError(path, "unterminated index");
            const std::string digits = path.substr(i + 1, close - i - 1);
            if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
                throw ConfigError(path, "index must be a non-negative integer");
            }
            parts.push_back({{}, true, std::stoul(digits)});
            i = close + 1;
            continue;
        }
        const auto end = path.find_first_of(".[", i);
        parts.push_back({path.substr(i, end - i), false, 0});
        i = end == std::string::npos ? path.size() : end;
    }
    if (parts.empty()) throw ConfigError(path, "empty key");
    return parts;
}

void apply_override(Json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError(assignment, "override must have the form key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);

    Json value = Json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text; // bare words are strings

    Json* node = &doc;
    const auto parts = split_path(key);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const PathPart& p = parts[i];
        if (p.is_index) {
            if (!node->is_array()) throw ConfigError(key, "indexing a value that is not an array");
            if (p.index > node->size()) throw ConfigError(key, "index out of range");
            if (p.index == node->size()) node->push_back(Json::object());
            node = &(*node)[p.index];
        } else {
            if (node->is_null()) *node = Json::object();
            if (!node->is_object()) throw ConfigError(key, "descending into a value that is not an object");
            if (i + 1 == parts.size()) {
                // the two spellings of the gyro offset replace each other
                if (p.key == "offset_deg") node->erase("offset_rad");
                if (p.key == "offset_rad") node->erase("offset_deg");
            }
            node = &(*node)[p.key];
        }
    }
    *node = std::move(value);
}

std::size_t line_of(const std::string& text, std::size_t byte)
{
    std::size_t line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        line += text[i] == '\n';
    }
    return line;
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides,
                                 const std::filesystem::path& base_dir)
{
    Json user;
    try {
        user = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // e.byte is one past the offending character
        throw ParseError(line_of(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
    }
    if (!user.is_object()) throw ConfigError("<root>", "expected an object");

    Json doc;
    if (user.contains("builtin")) {
        if (!user["builtin"].is_string()) throw ConfigError("builtin", "expected a scenario name");
        const std::string name = user["builtin"].get<std::string>();
        const auto base = find_builtin(name);
        if (!base) throw ConfigError("builtin", "no builtin scenario named \"" + name + "\"");
        doc = to_json(*base);
        user.erase("builtin");
        // a terrain of another type shares no keys with the builtin one
        if (user.contains("terrain") && user["terrain"].is_object() && user["terrain"].contains("type") &&
            user["terrain"]["type"] != doc["terrain"]["type"]) {
            doc["terrain"] = Json::object();
        }
        doc.merge_patch(user);
    } else {
        doc = std::move(user);
    }

    for (const auto& o : overrides) {
        apply_override(doc, o);
    }
    return Reader(base_dir).read(doc);
}

ScenarioConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("<file>", "cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), overrides, path.parent_path());
}

std::string write_config(const ScenarioConfig& cfg) { return to_json(cfg).dump(2) + "\n"; }

std::uint64_t fnv1a64(const std::string& bytes)
{
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const ScenarioConfig& cfg)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(write_config(cfg))));
    return buf;
}

} // namespace rover
