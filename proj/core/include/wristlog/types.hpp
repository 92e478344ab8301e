#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace wristlog {

enum class SensorKind { Gyroscope, Accelerometer };

inline const char* to_string(SensorKind kind) {
    return kind == SensorKind::Gyroscope ? "gyroscope" : "accelerometer";
}

inline SensorKind sensor_kind_from_string(const std::string& name) {
    if (name == "gyroscope") return SensorKind::Gyroscope;
    if (name == "accelerometer") return SensorKind::Accelerometer;
    throw std::invalid_argument("unknown sensor kind: " + name);
}

/// One raw motion sensor reading. Timestamps are Unix epoch milliseconds.
struct SensorEvent {
    std::int64_t t = 0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    SensorKind sensor = SensorKind::Gyroscope;

    friend bool operator==(const SensorEvent&, const SensorEvent&) = default;
};

/// Ground-truth keystroke reported by the training device.
struct LabelEvent {
    std::int64_t t = 0;
    std::string label;

    friend bool operator==(const LabelEvent&, const LabelEvent&) = default;
};

/// Column-oriented 3-axis time series for a single sensor.
/// Invariant: timestamps strictly increasing, all columns equal length.
struct TriaxialSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> z;
    SensorKind sensor = SensorKind::Gyroscope;

    std::size_t size() const { return timestamps.size(); }
    bool empty() const { return timestamps.empty(); }

    void push_back(const SensorEvent& e) {
        timestamps.push_back(e.t);
        x.push_back(e.x);
        y.push_back(e.y);
        z.push_back(e.z);
    }

    SensorEvent event_at(std::size_t i) const {
        return SensorEvent{timestamps[i], x[i], y[i], z[i], sensor};
    }

    const std::vector<double>& axis(int a) const {
        switch (a) {
            case 0: return x;
            case 1: return y;
            default: return z;
        }
    }
    std::vector<double>& axis(int a) {
        switch (a) {
            case 0: return x;
            case 1: return y;
            default: return z;
        }
    }

    friend bool operator==(const TriaxialSeries&, const TriaxialSeries&) = default;
};

/// One closed recording session: both sensor streams plus the label stream.
struct RecordingSession {
    std::string id;
    TriaxialSeries gyroscope{.sensor = SensorKind::Gyroscope};
    TriaxialSeries accelerometer{.sensor = SensorKind::Accelerometer};
    std::vector<LabelEvent> labels;

    friend bool operator==(const RecordingSession&, const RecordingSession&) = default;
};

/// Ordered key alphabet with a symbol <-> index bijection.
class LabelCodebook {
public:
    LabelCodebook() = default;
    explicit LabelCodebook(std::vector<std::string> alphabet);

    /// Keypad reading order used throughout: "1".."9", "*", "0", "#".
    static LabelCodebook keypad12();

    /// Distinct symbols of a label stream, lexicographically ordered.
    static LabelCodebook from_labels(const std::vector<LabelEvent>& labels);

    std::size_t size() const { return alphabet_.size(); }
    const std::vector<std::string>& alphabet() const { return alphabet_; }

    std::size_t index_of(const std::string& symbol) const;
    const std::string& symbol_at(std::size_t index) const;
    bool contains(const std::string& symbol) const;

    friend bool operator==(const LabelCodebook& a, const LabelCodebook& b) {
        return a.alphabet_ == b.alphabet_;
    }

private:
    std::vector<std::string> alphabet_;
};

}  // namespace wristlog
