#include <doctest.h>

#include <cmath>
#include <vector>

#include "wristlog/segmentation.hpp"

using namespace wristlog;

namespace {

FusedFrameSequence grid_frames(std::size_t n, std::int64_t interval) {
    FusedFrameSequence frames;
    frames.interval_ms = interval;
    for (std::size_t i = 0; i < n; ++i) {
        frames.timestamps.push_back(static_cast<std::int64_t>(i) * interval);
        frames.frames.push_back({static_cast<double>(i)});
    }
    return frames;
}

}  // namespace

TEST_CASE("PAPR of an isolated pulse") {
    // RMS of {0,0,3,0,0} is sqrt(9/5); the peak ratio is 9 / (9/5) = 5.
    const auto r = papr({0, 0, 3, 0, 0});
    CHECK(r[2] == doctest::Approx(5.0));
    CHECK(r[0] == 0.0);
}

TEST_CASE("PAPR is scale invariant") {
    const std::vector<double> base{0.5, -1.0, 2.0, 0.25, -3.0, 1.5};
    const auto a = papr(base);
    std::vector<double> scaled = base;
    for (double& v : scaled) v *= 8.0;  // power of two: scaling is exact in IEEE-754
    const auto b = papr(scaled);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("peak detection finds strict interior maxima above threshold") {
    const std::vector<double> r{0, 1, 0, 5, 0, 0.2, 0.1, 9};
    CHECK(detect_peaks(r, 0.4) == std::vector<std::size_t>{1, 3});
    CHECK(detect_peaks(r, 2.0) == std::vector<std::size_t>{3});
}

TEST_CASE("ratio smoothing is a centered moving average") {
    CHECK(smooth_ratios({1, 2, 3, 4}, 0) == std::vector<double>{1, 2, 3, 4});
    const auto s = smooth_ratios({0, 0, 6, 0, 0}, 1);
    CHECK(s == std::vector<double>{0, 2, 2, 2, 0});
}

TEST_CASE("label segmentation cuts a window per label") {
    const FusedFrameSequence frames = grid_frames(100, 2);
    const std::vector<LabelEvent> labels{{40, "a"}, {121, "b"}, {198, "edge"}};
    const auto segments = segment_by_labels(frames, labels, 5);
    REQUIRE(segments.size() == 2);  // the window at t=198 does not fit
    CHECK(segments[0].center_index == 20);
    CHECK(segments[0].frames.size() == 10);
    CHECK(segments[1].center_time_ms == 120);  // 121 snaps to the nearest grid point
    CHECK(segments[1].label == "b");
}

TEST_CASE("peak segmentation recovers pulse positions") {
    const FusedFrameSequence frames = grid_frames(200, 2);
    TriaxialSeries gyro;
    gyro.timestamps = frames.timestamps;
    gyro.x.assign(200, 0.0);
    gyro.y.assign(200, 0.0);
    gyro.z.assign(200, 0.0);
    for (std::size_t c : {50u, 120u}) {
        for (int d = -4; d <= 4; ++d)
            gyro.x[c + static_cast<std::size_t>(d)] += 3.0 * (1.0 - std::abs(d) / 5.0);
    }
    const auto segments = segment_by_peaks(frames, gyro, 10, 0.4, 1);
    REQUIRE(segments.size() == 2);
    CHECK(segments[0].center_index == 50);
    CHECK(segments[1].center_index == 120);
    CHECK_FALSE(segments[0].label.has_value());
}

TEST_CASE("label matching is greedy by distance and one-to-one") {
    FusedFrameSequence frames = grid_frames(100, 2);
    std::vector<Segment> segments;
    for (std::size_t c : {20u, 25u, 70u}) {
        Segment s;
        s.center_index = c;
        s.center_time_ms = frames.timestamps[c];
        segments.push_back(s);
    }
    const std::vector<LabelEvent> labels{{42, "x"}, {139, "y"}, {900, "far"}};
    const auto matched = match_labels_to_peaks(segments, labels, 60);
    REQUIRE(matched.size() == 2);
    CHECK(matched[0].center_time_ms == 40);  // the nearer of the two peaks wins "x"
    CHECK(matched[0].label == "x");
    CHECK(matched[1].center_time_ms == 140);
    CHECK(matched[1].label == "y");
}
