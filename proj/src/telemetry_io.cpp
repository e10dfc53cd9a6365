#include "rover/telemetry_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rover/errors.hpp"

namespace rover {

namespace {

// column order matches kCsvColumns; the two alarm flags follow separately
constexpr std::array<double TelemetryRecord::*, 27> kRealFields = {
    &TelemetryRecord::t,          &TelemetryRecord::plant_x,          &TelemetryRecord::plant_y,
    &TelemetryRecord::plant_psi,  &TelemetryRecord::plant_u,          &TelemetryRecord::obs_x,
    &TelemetryRecord::obs_y,      &TelemetryRecord::obs_psi,          &TelemetryRecord::obs_u,
    &TelemetryRecord::psi_meas,   &TelemetryRecord::speed_meas,       &TelemetryRecord::accel_x,
    &TelemetryRecord::v_left,     &TelemetryRecord::v_right,          &TelemetryRecord::vital_ax,
    &TelemetryRecord::vital_ddot, &TelemetryRecord::vital_psidot,     &TelemetryRecord::vital_vdot,
    &TelemetryRecord::p,          &TelemetryRecord::h_raw,            &TelemetryRecord::h,
    &TelemetryRecord::r_psi,      &TelemetryRecord::r_v,              &TelemetryRecord::thr_psi_adaptive,
    &TelemetryRecord::thr_v_adaptive, &TelemetryRecord::thr_psi_static, &TelemetryRecord::thr_v_static};

void put_real(std::string& line, double v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    line.append(buf, res.ptr);
}

} // namespace

void write_csv(const std::vector<TelemetryRecord>& records, std::ostream& out)
{
    std::string line;
    for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
        if (i) line += ',';
        line += kCsvColumns[i];
    }
    line += '\n';
    out << line;
    for (const auto& r : records) {
        line.clear();
        for (auto field : kRealFields) {
            put_real(line, r.*field);
            line += ',';
        }
        line += r.alarm_psi ? '1' : '0';
        line += ',';
        line += r.alarm_v ? '1' : '0';
        line += '\n';
        out << line;
    }
}

void export_csv(const TelemetryLog& log, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    write_csv(log.records, out);
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<TelemetryRecord> read_csv(std::istream& in)
{
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line)) throw ParseError(1, "empty telemetry file");
    {
        std::string expected;
        for (std::size_t i = 0; i < kCsvColumns.size(); ++i) {
            if (i) expected += ',';
            expected += kCsvColumns[i];
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != expected) throw ParseError(1, "unexpected telemetry header");
    }

    std::vector<TelemetryRecord> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        TelemetryRecord r;
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (std::size_t col = 0; col < kCsvColumns.size(); ++col) {
            if (col > 0) {
                if (p >= end || *p != ',') {
                    throw ParseError(line_no, "expected " + std::to_string(kCsvColumns.size()) + " columns");
                }
                ++p;
            }
            double v = 0;
            const auto res = std::from_chars(p, end, v);
            if (res.ec != std::errc{}) {
                throw ParseError(line_no, "bad value in column " + std::string(kCsvColumns[col]));
            }
            p = res.ptr;
            if (col < kRealFields.size()) {
                r.*kRealFields[col] = v;
            } else if (col == kRealFields.size()) {
                r.alarm_psi = v != 0;
            } else {
                r.alarm_v = v != 0;
            }
        }
        if (p != end) throw ParseError(line_no, "trailing data after last column");
        out.push_back(r);
    }
    return out;
}

std::vector<TelemetryRecord> load_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return read_csv(in);
}

} // namespace rover
