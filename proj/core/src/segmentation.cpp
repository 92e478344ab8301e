#include "wristlog/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace wristlog {

namespace {

std::optional<Segment> window_at(const FusedFrameSequence& frames, std::size_t center,
                                 int half_window) {
    const std::size_t hw = static_cast<std::size_t>(half_window);
    if (center < hw || center + hw > frames.size()) return std::nullopt;
    Segment seg;
    seg.center_index = center;
    seg.center_time_ms = frames.timestamps[center];
    seg.frames.assign(frames.frames.begin() + static_cast<std::ptrdiff_t>(center - hw),
                      frames.frames.begin() + static_cast<std::ptrdiff_t>(center + hw));
    return seg;
}

std::size_t nearest_grid_index(const std::vector<std::int64_t>& grid, std::int64_t t) {
    auto it = std::lower_bound(grid.begin(), grid.end(), t);
    if (it == grid.begin()) return 0;
    if (it == grid.end()) return grid.size() - 1;
    std::size_t j = static_cast<std::size_t>(it - grid.begin());
    return (grid[j] - t < t - grid[j - 1]) ? j : j - 1;
}

}  // namespace

std::vector<Segment> segment_by_labels(const FusedFrameSequence& frames,
                                       const std::vector<LabelEvent>& labels, int half_window) {
    if (frames.size() == 0) throw std::invalid_argument("segment_by_labels: empty sequence");
    std::vector<Segment> out;
    for (const auto& l : labels) {
        std::size_t c = nearest_grid_index(frames.timestamps, l.t);
        auto seg = window_at(frames, c, half_window);
        if (!seg) {
            std::cerr << "warning: label '" << l.label << "' at t=" << l.t
                      << " has no full window, skipped\n";
            continue;
        }
        seg->label = l.label;
        out.push_back(std::move(*seg));
    }
    return out;
}

std::vector<double> mean_gyro_signal(const TriaxialSeries& gyro) {
    if (gyro.empty()) throw std::invalid_argument("mean_gyro_signal: empty series");
    std::vector<double> out(gyro.size());
    for (std::size_t i = 0; i < gyro.size(); ++i) out[i] = (gyro.x[i] + gyro.y[i] + gyro.z[i]) / 3.0;
    return out;
}

std::vector<double> papr(const std::vector<double>& mean_signal) {
    double sq = 0.0;
    for (double v : mean_signal) sq += v * v;
    const double rms = std::sqrt(sq / static_cast<double>(mean_signal.size()));
    if (rms == 0.0) throw std::invalid_argument("papr: all-zero signal");
    std::vector<double> out(mean_signal.size());
    for (std::size_t i = 0; i < mean_signal.size(); ++i) {
        const double r = mean_signal[i] / rms;
        out[i] = r * r;
    }
    return out;
}

std::vector<double> smooth_ratios(const std::vector<double>& ratios, int half_width) {
    if (half_width <= 0) return ratios;
    std::vector<double> out(ratios.size());
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(ratios.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - half_width);
        const std::ptrdiff_t hi = std::min(n - 1, i + half_width);
        double sum = 0.0;
        for (std::ptrdiff_t j = lo; j <= hi; ++j) sum += ratios[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<std::size_t> detect_peaks(const std::vector<double>& ratios, double threshold) {
    std::vector<std::size_t> peaks;
    for (std::size_t i = 1; i + 1 < ratios.size(); ++i) {
        if (ratios[i] > ratios[i - 1] && ratios[i] > ratios[i + 1] && ratios[i] > threshold)
            peaks.push_back(i);
    }
    return peaks;
}

std::vector<Segment> segment_by_peaks(const FusedFrameSequence& frames,
                                      const TriaxialSeries& gyro, int half_window,
                                      double peak_threshold, int smoothing_half_width) {
    if (gyro.size() != frames.size())
        throw std::invalid_argument("segment_by_peaks: gyro series not on the frame grid");
    auto mean = mean_gyro_signal(gyro);
    bool all_zero = std::all_of(mean.begin(), mean.end(), [](double v) { return v == 0.0; });
    if (all_zero) return {};
    std::vector<Segment> out;
    for (std::size_t peak :
         detect_peaks(smooth_ratios(papr(mean), smoothing_half_width), peak_threshold)) {
        if (auto seg = window_at(frames, peak, half_window)) out.push_back(std::move(*seg));
    }
    return out;
}

std::vector<Segment> match_labels_to_peaks(const std::vector<Segment>& segments,
                                           const std::vector<LabelEvent>& labels,
                                           std::int64_t tolerance_ms) {
    struct Candidate {
        std::int64_t distance;
        std::size_t segment;
        std::size_t label;
    };
    std::vector<Candidate> candidates;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        for (std::size_t l = 0; l < labels.size(); ++l) {
            std::int64_t d = std::llabs(segments[s].center_time_ms - labels[l].t);
            if (d <= tolerance_ms) candidates.push_back({d, s, l});
        }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.distance < b.distance; });

    std::vector<bool> segment_used(segments.size(), false);
    std::vector<bool> label_used(labels.size(), false);
    std::vector<std::optional<std::string>> assigned(segments.size());
    for (const auto& c : candidates) {
        if (segment_used[c.segment] || label_used[c.label]) continue;
        segment_used[c.segment] = true;
        label_used[c.label] = true;
        assigned[c.segment] = labels[c.label].label;
    }

    std::vector<Segment> out;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (!assigned[s]) continue;
        Segment seg = segments[s];
        seg.label = assigned[s];
        out.push_back(std::move(seg));
    }
    return out;
}

}  // namespace wristlog
