#include "rover/report.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "rover/errors.hpp"

namespace rover {

namespace {

using Json = nlohmann::ordered_json;

Json opt(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> opt_from(const Json& j)
{
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

Channel channel_from(const std::string& s)
{
    if (s == "heading") return Channel::Heading;
    if (s == "velocity") return Channel::Velocity;
    throw std::invalid_argument("unknown channel " + s);
}

DetectorKind detector_from(const std::string& s)
{
    if (s == "adaptive") return DetectorKind::Adaptive;
    if (s == "static") return DetectorKind::Static;
    throw std::invalid_argument("unknown detector " + s);
}

Json to_json(const RunSummary& s)
{
    Json dets = Json::array();
    for (const auto& d : s.detections) {
        dets.push_back(Json{{"t", d.t},
                            {"channel", std::string(to_string(d.channel))},
                            {"detector", std::string(to_string(d.detector))},
                            {"residual", d.residual_value},
                            {"threshold", d.threshold_value}});
    }
    Json clears = Json::array();
    for (const auto& c : s.clears) {
        clears.push_back(Json{{"t", c.t},
                              {"channel", std::string(to_string(c.channel))},
                              {"detector", std::string(to_string(c.detector))}});
    }
    return Json{{"name", s.name},
                {"config_hash", s.config_hash},
                {"t_inject", opt(s.t_inject)},
                {"detection_latency", opt(s.detection_latency)},
                {"heading_latency", opt(s.heading_latency)},
                {"velocity_latency", opt(s.velocity_latency)},
                {"min_health", s.min_health},
                {"final_health", s.final_health},
                {"waypoint_count", s.waypoint_count},
                {"plant_collection_times", s.plant_collection_times},
                {"observer_collection_times", s.observer_collection_times},
                {"collection_deltas", s.collection_deltas},
                {"steps", s.steps},
                {"end_time", s.end_time},
                {"aborted", s.aborted},
                {"abort_reason", s.abort_reason},
                {"detections", dets},
                {"clears", clears}};
}

std::size_t adaptive_count(const RunSummary& s)
{
    return static_cast<std::size_t>(std::count_if(s.detections.begin(), s.detections.end(), [](const auto& d) {
        return d.detector == DetectorKind::Adaptive;
    }));
}

std::size_t static_count(const RunSummary& s) { return s.detections.size() - adaptive_count(s); }

} // namespace

std::string summary_to_json(const RunSummary& s) { return to_json(s).dump(2) + "\n"; }

RunSummary summary_from_json(const std::string& text)
{
    const Json j = Json::parse(text);
    RunSummary s;
    s.name = j.at("name").get<std::string>();
    s.config_hash = j.at("config_hash").get<std::string>();
    s.t_inject = opt_from(j.at("t_inject"));
    s.detection_latency = opt_from(j.at("detection_latency"));
    s.heading_latency = opt_from(j.at("heading_latency"));
    s.velocity_latency = opt_from(j.at("velocity_latency"));
    s.min_health = j.at("min_health").get<double>();
    s.final_health = j.at("final_health").get<double>();
    s.waypoint_count = j.at("waypoint_count").get<std::size_t>();
    s.plant_collection_times = j.at("plant_collection_times").get<std::vector<double>>();
    s.observer_collection_times = j.at("observer_collection_times").get<std::vector<double>>();
    s.collection_deltas = j.at("collection_deltas").get<std::vector<double>>();
    s.steps = j.at("steps").get<std::size_t>();
    s.end_time = j.at("end_time").get<double>();
    s.aborted = j.at("aborted").get<bool>();
    s.abort_reason = j.at("abort_reason").get<std::string>();
    for (const auto& d : j.at("detections")) {
        s.detections.push_back(DetectionEvent{d.at("t").get<double>(), channel_from(d.at("channel")),
                                              d.at("residual").get<double>(), d.at("threshold").get<double>(),
                                              detector_from(d.at("detector"))});
    }
    for (const auto& c : j.at("clears")) {
        s.clears.push_back(
            AlarmClear{c.at("t").get<double>(), channel_from(c.at("channel")), detector_from(c.at("detector"))});
    }
    return s;
}

std::string make_report(const std::vector<RunSummary>& summaries)
{
    if (summaries.empty()) throw std::invalid_argument("report needs at least one run summary");

    Json runs = Json::array();
    for (const auto& s : summaries) runs.push_back(to_json(s));

    // group "<path>_<case>" names by path; other names stand alone
    std::map<std::string, std::map<std::string, const RunSummary*>> groups;
    for (const auto& s : summaries) {
        const auto us = s.name.rfind('_');
        if (us != std::string::npos && us + 2 == s.name.size() && std::string("ABC").find(s.name.back()) != std::string::npos) {
            groups[s.name.substr(0, us)][s.name.substr(us + 1)] = &s;
        }
    }
    Json table = Json::array();
    for (const auto& [path, cases] : groups) {
        Json row{{"scenario", path}};
        Json by_case = Json::object();
        for (const auto& [tc, s] : cases) {
            by_case[tc] = Json{{"adaptive_detections", adaptive_count(*s)},
                               {"static_detections", static_count(*s)},
                               {"heading_latency", opt(s->heading_latency)},
                               {"velocity_latency", opt(s->velocity_latency)},
                               {"min_health", s->min_health},
                               {"final_health", s->final_health},
                               {"waypoints_collected", s->plant_collection_times.size()},
                               {"final_collection_delta",
                                s->collection_deltas.empty() ? Json(nullptr) : Json(s->collection_deltas.back())}};
        }
        row["cases"] = by_case;
        table.push_back(row);
    }

    return Json{{"run_count", summaries.size()}, {"runs", runs}, {"comparison", table}}.dump(2) + "\n";
}

std::vector<RunSummary> collect_summaries(const std::filesystem::path& dir)
{
    if (!std::filesystem::is_directory(dir)) throw std::runtime_error("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    if (std::filesystem::exists(dir / "summary.json")) files.push_back(dir / "summary.json");
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.is_directory() && std::filesystem::exists(e.path() / "summary.json")) {
            files.push_back(e.path() / "summary.json");
        }
    }
    std::vector<RunSummary> out;
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        try {
            out.push_back(summary_from_json(ss.str()));
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error(f.string() + ": " + e.what());
        }
    }
    std::sort(out.begin(), out.end(), [](const RunSummary& a, const RunSummary& b) { return a.name < b.name; });
    return out;
}

} // namespace rover
