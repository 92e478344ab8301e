#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wristlog/types.hpp"

namespace wristlog {

/// Axis combinations for the per-frame fused vector.
enum class FusionStrategy { G3, A3, Gmean, Amean, GmeanAmean, GmeanA3, G3Amean, G3A3 };

FusionStrategy fusion_strategy_from_string(const std::string& name);
const char* to_string(FusionStrategy s);
int fused_dimension(FusionStrategy s);
const std::vector<FusionStrategy>& all_fusion_strategies();

struct FusionConfig {
    std::int64_t interval_ms = 2;
    FusionStrategy strategy = FusionStrategy::G3A3;
};

/// Time-aligned multi-channel frames on a constant-interval grid.
struct FusedFrameSequence {
    std::vector<std::int64_t> timestamps;
    std::vector<std::vector<double>> frames;
    std::int64_t interval_ms = 2;

    std::size_t size() const { return timestamps.size(); }
};

/// Resample onto the grid t0, t0+a, ... covering [t0, tn] (remainder shorter
/// than a is dropped). Grid values at measured times are the measurements;
/// the rest are linearly interpolated.
TriaxialSeries resample_constant_rate(const TriaxialSeries& series, std::int64_t interval_ms);

/// Linearly interpolate the accelerometer at every gyroscope grid timestamp.
/// Grid points outside the accelerometer span take the nearest endpoint value.
TriaxialSeries align_accelerometer(const TriaxialSeries& accel,
                                   const std::vector<std::int64_t>& gyro_grid);

/// Assemble per-frame vectors from two series already on the same grid.
FusedFrameSequence fuse(const TriaxialSeries& gyro, const TriaxialSeries& accel,
                        const FusionConfig& config);

/// Resample + align + fuse in one step, from raw (possibly irregular) series.
FusedFrameSequence fuse_session(const RecordingSession& session, const FusionConfig& config);

}  // namespace wristlog
