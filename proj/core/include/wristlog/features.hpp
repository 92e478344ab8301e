#pragma once

#include <array>
#include <string>
#include <vector>

#include "wristlog/segmentation.hpp"
#include "wristlog/types.hpp"

namespace wristlog {

enum class FeatureKind { Statistical, Segment };

FeatureKind feature_kind_from_string(const std::string& name);
const char* to_string(FeatureKind kind);

/// Classifier inputs: one row per segment, with parallel one-hot targets
/// (all-zero for unlabeled segments, which only appear at inference time). For segment features each row is the time-major flattening of a
/// (frames x channel) window; frame_dim records the channel count so
/// sequence models can recover the 2-D view.
struct FeatureMatrix {
    std::vector<std::vector<double>> rows;
    std::vector<std::vector<double>> targets;
    LabelCodebook codebook;
    FeatureKind kind = FeatureKind::Statistical;
    int frame_dim = 0;  // channels per frame; 0 for statistical rows

    std::size_t size() const { return rows.size(); }
    std::size_t target_index(std::size_t row) const;
};

/// Per-column affine map onto [-1, 1], fitted on training rows only and
/// reused at evaluation/inference time.
struct ColumnNormalizer {
    std::vector<double> lo;
    std::vector<double> hi;

    static ColumnNormalizer fit(const std::vector<std::vector<double>>& rows);
    std::vector<double> apply(const std::vector<double>& row) const;
    std::vector<std::vector<double>> apply_all(const std::vector<std::vector<double>>& rows) const;
};

/// <min, max, RMS, peak count, crest factor, skewness, kurtosis, variance>
/// over one axis window. Zero variance forces skewness = kurtosis = 0.
std::array<double, 8> statistical_vector(const std::vector<double>& values,
                                         double peak_threshold);

/// 48-dim rows: the 8 statistics per channel over the 6 fused channels
/// (gyro x,y,z then accel x,y,z). Segments must carry 6-dim (G3A3) frames.
FeatureMatrix build_statistical_features(const std::vector<Segment>& segments,
                                         const LabelCodebook& codebook, double peak_threshold);

/// Rows are frames flattened time-major (dimension frames * channels).
FeatureMatrix build_segment_features(const std::vector<Segment>& segments,
                                     const LabelCodebook& codebook);

std::vector<double> encode_label(const std::string& symbol, const LabelCodebook& codebook);
std::string decode_label(const std::vector<double>& one_hot, const LabelCodebook& codebook);

}  // namespace wristlog
