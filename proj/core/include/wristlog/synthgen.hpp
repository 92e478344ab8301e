#pragma once

#include <cstdint>
#include <utility>

#include "wristlog/types.hpp"

namespace wristlog {

/// Deterministic synthetic keystroke-session generator: per-key smooth bump
/// templates on both sensors, jittered sampling, seeded Gaussian noise, and
/// ground-truth labels at the bump centers.
struct SynthConfig {
    std::uint64_t seed = 0x5EED;
    LabelCodebook alphabet = LabelCodebook::keypad12();
    int instances_per_key = 20;
    std::int64_t gap_ms = 600;
    std::int64_t gap_jitter_ms = 100;
    std::int64_t keystroke_duration_ms = 200;
    /// Per-axis clean-signal RMS divided by the additive noise std-dev.
    /// Infinity means noiseless.
    double snr = 6.0;
    /// Multiplicative sampling-delay jitter as a fraction of the nominal
    /// delay (gyroscope 10 ms, accelerometer 62.5 ms).
    double sampling_jitter = 0.2;
    /// Distinct ids model distinct keypads for the transfer experiment.
    int template_family = 0;

    void validate() const;
};

/// Make a config noiseless (infinite SNR, zero jitter).
SynthConfig noiseless(SynthConfig config);

RecordingSession generate_session(const SynthConfig& config);

/// Two sessions over the same alphabet with correlated but non-identical
/// per-key templates (the second family is a smooth warp of the first).
std::pair<RecordingSession, RecordingSession> generate_pair(const SynthConfig& config,
                                                            int second_family);

}  // namespace wristlog
