#pragma once

#include <vector>

#include "wristlog/types.hpp"

namespace wristlog {

struct PreprocessConfig {
    int median_window_gyro = 9;
    int median_window_accel = 5;
    double gyro_sampling_delay_us = 10000.0;
    double accel_sampling_delay_us = 62500.0;
    double gyro_lowpass_cutoff_hz = 8.0;
    double accel_highpass_cutoff_hz = 0.3;
    int butterworth_order = 2;
    double kalman_q = 1e-3;
    double kalman_r = 1e-1;

    void validate() const;
};

/// Raw mode keeps calibration only; everything else is skipped.
enum class PipelineMode { Full, CalibrationOnly };

enum class FilterKind { LowPass, HighPass };

/// Subtract the per-axis mean; removes gravity-like constant offsets.
TriaxialSeries calibrate(const TriaxialSeries& series);

/// Sliding median over a window of odd size w centered at each element,
/// with edge replication so the output length matches the input.
std::vector<double> median_filter(const std::vector<double>& values, int w);

/// Sampling frequency in Hz from a sampling delay in microseconds.
double sampling_frequency(double delay_us);

/// Causal digital Butterworth filter (bilinear-transform coefficients),
/// applied forward once from zero initial state.
std::vector<double> butterworth(const std::vector<double>& values, FilterKind kind,
                                double cutoff_hz, double sample_rate_hz, int order);

/// Scalar constant-state Kalman filter: predict adds q to the variance,
/// update blends the measurement with gain p/(p+r). Starts at the first
/// measurement with variance r.
std::vector<double> kalman_smooth(const std::vector<double>& values, double q, double r);

/// Affine map of [min, max] onto [-1, 1]; constant input maps to zeros.
std::vector<double> normalize(const std::vector<double>& values);

/// Full cleaning chain: calibration, median, Butterworth band selection
/// (low-pass gyro, high-pass accel), Kalman, normalization. Labels pass
/// through untouched.
RecordingSession preprocess_pipeline(const RecordingSession& session,
                                     const PreprocessConfig& config,
                                     PipelineMode mode = PipelineMode::Full);

}  // namespace wristlog
