#include "wristlog/session_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace wristlog {

namespace {

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void require_finite(const SensorEvent& e) {
    if (!std::isfinite(e.x) || !std::isfinite(e.y) || !std::isfinite(e.z))
        throw std::invalid_argument("non-finite sensor value at t=" + std::to_string(e.t));
}

void write_sensor_csv(const TriaxialSeries& series, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
    out << "t,x,y,z\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        SensorEvent e = series.event_at(i);
        require_finite(e);
        out << e.t << ',' << format_real(e.x) << ',' << format_real(e.y) << ','
            << format_real(e.z) << '\n';
    }
    if (!out) throw std::runtime_error("write failed: " + file.string());
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

[[noreturn]] void parse_fail(const std::filesystem::path& file, std::size_t line_no,
                             const std::string& what) {
    throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": " + what);
}

double parse_real(const std::string& s, const std::filesystem::path& file, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        double v = std::stod(s, &pos);
        if (pos != s.size()) parse_fail(file, line_no, "trailing characters in number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        parse_fail(file, line_no, "non-numeric field '" + s + "'");
    }
}

std::int64_t parse_timestamp(const std::string& s, const std::filesystem::path& file,
                             std::size_t line_no) {
    try {
        std::size_t pos = 0;
        std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) parse_fail(file, line_no, "trailing characters in timestamp '" + s + "'");
        if (v < 0) parse_fail(file, line_no, "negative timestamp");
        return v;
    } catch (const std::logic_error&) {
        parse_fail(file, line_no, "non-numeric timestamp '" + s + "'");
    }
}

std::vector<SensorEvent> read_sensor_csv(const std::filesystem::path& file, SensorKind kind) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("missing file: " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + file.string());
    std::vector<SensorEvent> events;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 4) parse_fail(file, line_no, "expected 4 fields, got " +
                                                              std::to_string(fields.size()));
        SensorEvent e;
        e.t = parse_timestamp(fields[0], file, line_no);
        e.x = parse_real(fields[1], file, line_no);
        e.y = parse_real(fields[2], file, line_no);
        e.z = parse_real(fields[3], file, line_no);
        e.sensor = kind;
        events.push_back(e);
    }
    return events;
}

std::vector<LabelEvent> read_labels_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("missing file: " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + file.string());
    std::vector<LabelEvent> labels;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != 2) parse_fail(file, line_no, "expected 2 fields, got " +
                                                              std::to_string(fields.size()));
        labels.push_back({parse_timestamp(fields[0], file, line_no), fields[1]});
    }
    return labels;
}

}  // namespace

std::vector<SensorEvent> sort_events(std::vector<SensorEvent> events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const SensorEvent& a, const SensorEvent& b) { return a.t < b.t; });
    return events;
}

std::vector<LabelEvent> sort_events(std::vector<LabelEvent> events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const LabelEvent& a, const LabelEvent& b) { return a.t < b.t; });
    return events;
}

void sort_events(RecordingSession& session) {
    for (TriaxialSeries* series : {&session.gyroscope, &session.accelerometer}) {
        std::vector<SensorEvent> events;
        events.reserve(series->size());
        for (std::size_t i = 0; i < series->size(); ++i)
            events.push_back(series->event_at(i));
        *series = series_from_events(std::move(events), series->sensor);
    }
    session.labels = sort_events(std::move(session.labels));
}

TriaxialSeries series_from_events(std::vector<SensorEvent> events, SensorKind kind) {
    events = sort_events(std::move(events));
    TriaxialSeries series;
    series.sensor = kind;
    for (const auto& e : events) {
        if (!series.empty() && e.t == series.timestamps.back()) {
            // Duplicate timestamp: the later event wins.
            std::size_t last = series.size() - 1;
            series.x[last] = e.x;
            series.y[last] = e.y;
            series.z[last] = e.z;
        } else {
            series.push_back(e);
        }
    }
    return series;
}

void write_session(const RecordingSession& session, const std::filesystem::path& directory) {
    std::filesystem::create_directories(directory);
    write_sensor_csv(session.gyroscope, directory / "gyroscope.csv");
    write_sensor_csv(session.accelerometer, directory / "accelerometer.csv");

    auto labels_file = directory / "labels.csv";
    std::ofstream out(labels_file);
    if (!out) throw std::runtime_error("cannot open for writing: " + labels_file.string());
    out << "t,label\n";
    for (const auto& l : sort_events(session.labels)) out << l.t << ',' << l.label << '\n';
    if (!out) throw std::runtime_error("write failed: " + labels_file.string());
}

RecordingSession read_session(const std::filesystem::path& directory) {
    RecordingSession session;
    session.id = directory.filename().string();
    session.gyroscope =
        series_from_events(read_sensor_csv(directory / "gyroscope.csv", SensorKind::Gyroscope),
                           SensorKind::Gyroscope);
    session.accelerometer = series_from_events(
        read_sensor_csv(directory / "accelerometer.csv", SensorKind::Accelerometer),
        SensorKind::Accelerometer);
    session.labels = sort_events(read_labels_csv(directory / "labels.csv"));

    if (!session.gyroscope.empty() && !session.labels.empty()) {
        auto lo = session.gyroscope.timestamps.front();
        auto hi = session.gyroscope.timestamps.back();
        for (const auto& l : session.labels) {
            if (l.t < lo || l.t > hi) {
                std::cerr << "warning: label '" << l.label << "' at t=" << l.t
                          << " outside gyroscope time range [" << lo << ", " << hi << "]\n";
            }
        }
    }
    return session;
}

}  // namespace wristlog
