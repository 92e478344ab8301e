#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wristlog/fusion.hpp"
#include "wristlog/types.hpp"

namespace wristlog {

/// Per-keystroke window of 2 * half_window fused frames.
struct Segment {
    std::size_t center_index = 0;
    std::int64_t center_time_ms = 0;
    std::vector<std::vector<double>> frames;
    std::optional<std::string> label;
};

struct SegmentationConfig {
    int half_window = 25;        // frames either side of the center
    double peak_threshold = 0.7; // minimum PAPR for a keystroke peak
    std::int64_t papr_smoothing_ms = 20;  // moving-average half-width on the PAPR trace
    std::int64_t match_tolerance_ms = 60;
};

/// One segment per label whose window [c - hw, c + hw) fits in the sequence;
/// c is the grid index nearest the label timestamp. Out-of-range labels are
/// skipped with a warning on stderr.
std::vector<Segment> segment_by_labels(const FusedFrameSequence& frames,
                                       const std::vector<LabelEvent>& labels, int half_window);

/// Per-sample mean of the three gyroscope axes.
std::vector<double> mean_gyro_signal(const TriaxialSeries& gyro);

/// Peak-to-average power ratio: squared ratio of each sample to the RMS of
/// the whole signal.
std::vector<double> papr(const std::vector<double>& mean_signal);

/// Centered moving average with the given half-width (edge windows shrink).
std::vector<double> smooth_ratios(const std::vector<double>& ratios, int half_width);

/// Interior indices that are strict local maxima above the threshold.
std::vector<std::size_t> detect_peaks(const std::vector<double>& ratios, double threshold);

/// Windows centered on PAPR peaks of the gyroscope mean signal; the gyro
/// series must share the frame sequence's grid. Segments come back unlabeled.
std::vector<Segment> segment_by_peaks(const FusedFrameSequence& frames,
                                      const TriaxialSeries& gyro, int half_window,
                                      double peak_threshold, int smoothing_half_width = 2);

/// Attach the nearest label (within tolerance) to each segment, greedily by
/// distance and using each label at most once; unmatched segments drop out.
std::vector<Segment> match_labels_to_peaks(const std::vector<Segment>& segments,
                                           const std::vector<LabelEvent>& labels,
                                           std::int64_t tolerance_ms);

}  // namespace wristlog
