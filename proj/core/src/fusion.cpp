#include "wristlog/fusion.hpp"

#include <algorithm>
#include <stdexcept>

namespace wristlog {

namespace {

/// Linear interpolation of one axis at time t, clamped to the endpoints.
double interp_at(const std::vector<std::int64_t>& ts, const std::vector<double>& v,
                 std::int64_t t) {
    if (t <= ts.front()) return v.front();
    if (t >= ts.back()) return v.back();
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    std::size_t j = static_cast<std::size_t>(it - ts.begin());
    if (ts[j] == t) return v[j];
    std::size_t i = j - 1;
    const double frac = static_cast<double>(t - ts[i]) / static_cast<double>(ts[j] - ts[i]);
    return v[i] + frac * (v[j] - v[i]);
}

TriaxialSeries interpolate_on_grid(const TriaxialSeries& series,
                                   const std::vector<std::int64_t>& grid) {
    TriaxialSeries out;
    out.sensor = series.sensor;
    out.timestamps = grid;
    for (int a = 0; a < 3; ++a) {
        auto& axis = out.axis(a);
        axis.resize(grid.size());
        const auto& src = series.axis(a);
        for (std::size_t i = 0; i < grid.size(); ++i)
            axis[i] = interp_at(series.timestamps, src, grid[i]);
    }
    return out;
}

double mean3(double a, double b, double c) { return (a + b + c) / 3.0; }

}  // namespace

FusionStrategy fusion_strategy_from_string(const std::string& name) {
    std::string n;
    for (char c : name) n += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (n == "g3") return FusionStrategy::G3;
    if (n == "a3") return FusionStrategy::A3;
    if (n == "gmean") return FusionStrategy::Gmean;
    if (n == "amean") return FusionStrategy::Amean;
    if (n == "gmeanamean") return FusionStrategy::GmeanAmean;
    if (n == "gmeana3") return FusionStrategy::GmeanA3;
    if (n == "g3amean") return FusionStrategy::G3Amean;
    if (n == "g3a3") return FusionStrategy::G3A3;
    throw std::invalid_argument("unknown fusion strategy: " + name);
}

const char* to_string(FusionStrategy s) {
    switch (s) {
        case FusionStrategy::G3: return "G3";
        case FusionStrategy::A3: return "A3";
        case FusionStrategy::Gmean: return "Gmean";
        case FusionStrategy::Amean: return "Amean";
        case FusionStrategy::GmeanAmean: return "GmeanAmean";
        case FusionStrategy::GmeanA3: return "GmeanA3";
        case FusionStrategy::G3Amean: return "G3Amean";
        case FusionStrategy::G3A3: return "G3A3";
    }
    return "?";
}

int fused_dimension(FusionStrategy s) {
    switch (s) {
        case FusionStrategy::Gmean:
        case FusionStrategy::Amean: return 1;
        case FusionStrategy::GmeanAmean: return 2;
        case FusionStrategy::G3:
        case FusionStrategy::A3: return 3;
        case FusionStrategy::GmeanA3:
        case FusionStrategy::G3Amean: return 4;
        case FusionStrategy::G3A3: return 6;
    }
    return 0;
}

const std::vector<FusionStrategy>& all_fusion_strategies() {
    static const std::vector<FusionStrategy> all{
        FusionStrategy::G3,         FusionStrategy::A3,      FusionStrategy::Gmean,
        FusionStrategy::Amean,      FusionStrategy::GmeanAmean, FusionStrategy::GmeanA3,
        FusionStrategy::G3Amean,    FusionStrategy::G3A3};
    return all;
}

TriaxialSeries resample_constant_rate(const TriaxialSeries& series, std::int64_t interval_ms) {
    if (series.size() < 2) throw std::invalid_argument("resample: need at least 2 points");
    if (interval_ms < 1) throw std::invalid_argument("resample: interval must be >= 1 ms");
    const std::int64_t t0 = series.timestamps.front();
    const std::int64_t tn = series.timestamps.back();
    const std::int64_t k = (tn - t0) / interval_ms + 1;
    std::vector<std::int64_t> grid(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i)
        grid[static_cast<std::size_t>(i)] = t0 + interval_ms * i;
    return interpolate_on_grid(series, grid);
}

TriaxialSeries align_accelerometer(const TriaxialSeries& accel,
                                   const std::vector<std::int64_t>& gyro_grid) {
    if (accel.empty()) throw std::invalid_argument("align: empty accelerometer series");
    if (gyro_grid.empty()) throw std::invalid_argument("align: empty grid");
    if (accel.timestamps.back() < gyro_grid.front() ||
        accel.timestamps.front() > gyro_grid.back())
        throw std::invalid_argument("align: accelerometer span disjoint from gyroscope grid");
    return interpolate_on_grid(accel, gyro_grid);
}

FusedFrameSequence fuse(const TriaxialSeries& gyro, const TriaxialSeries& accel,
                        const FusionConfig& config) {
    if (gyro.timestamps != accel.timestamps)
        throw std::invalid_argument("fuse: series are not on the same grid");
    FusedFrameSequence out;
    out.interval_ms = config.interval_ms;
    out.timestamps = gyro.timestamps;
    out.frames.resize(gyro.size());
    for (std::size_t i = 0; i < gyro.size(); ++i) {
        const double gx = gyro.x[i], gy = gyro.y[i], gz = gyro.z[i];
        const double ax = accel.x[i], ay = accel.y[i], az = accel.z[i];
        std::vector<double>& f = out.frames[i];
        switch (config.strategy) {
            case FusionStrategy::G3: f = {gx, gy, gz}; break;
            case FusionStrategy::A3: f = {ax, ay, az}; break;
            case FusionStrategy::Gmean: f = {mean3(gx, gy, gz)}; break;
            case FusionStrategy::Amean: f = {mean3(ax, ay, az)}; break;
            case FusionStrategy::GmeanAmean: f = {mean3(gx, gy, gz), mean3(ax, ay, az)}; break;
            case FusionStrategy::GmeanA3: f = {mean3(gx, gy, gz), ax, ay, az}; break;
            case FusionStrategy::G3Amean: f = {gx, gy, gz, mean3(ax, ay, az)}; break;
            case FusionStrategy::G3A3: f = {gx, gy, gz, ax, ay, az}; break;
        }
    }
    return out;
}

FusedFrameSequence fuse_session(const RecordingSession& session, const FusionConfig& config) {
    TriaxialSeries gyro = resample_constant_rate(session.gyroscope, config.interval_ms);
    TriaxialSeries accel = align_accelerometer(session.accelerometer, gyro.timestamps);
    return fuse(gyro, accel, config);
}

}  // namespace wristlog
