#include "wristlog/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "wristlog/rng.hpp"
#include "wristlog/session_io.hpp"

namespace wristlog {
namespace {

constexpr double kGravity = 9.81;
constexpr std::int64_t kGyroDelayMs = 10;
constexpr double kAccelDelayMs = 62.5;
constexpr std::int64_t kEpochBaseMs = 1700000000000;  // fixed 13-digit base

// Per-key, per-family template: a raised-cosine main bump plus a smaller
// trailing bump, with amplitudes/widths that vary smoothly across the
// alphabet so every key has a distinct six-channel signature.
struct KeyTemplate {
    double amp[6];          // gyro xyz, accel xyz main-bump amplitudes
    double width_ms;        // gyro main bump full width
    double accel_width_ms;  // accel bump width; slower arm-mass dynamics
    double tail_amp;        // trailing accel bump amplitude, relative to amp
    double tail_off_ms;     // trailing bump centre offset
    double tail_width_ms;
};

KeyTemplate make_template(int key, int key_count, int family, double duration_ms) {
    // Key identity is coded on the gyroscope amplitudes alone: the low-rate
    // accelerometer barely survives its median window, so it only adds
    // flavor. Four levels per axis with a parity third coordinate keep every
    // key pair at least two axis-levels apart; width is uniform so the
    // low-pass/Kalman attenuation rescales every key identically, and the
    // bump peak stays exactly on the keystroke center.
    const int q1 = key % 4;
    const int q2 = (key / 4) % 4;
    const int q3 = (q1 + q2 + 2) % 4;  // offset: no key is minimum-level on every axis
    const double phi = 2.0 * std::numbers::pi * key / key_count;
    // Smooth warp between families: same key geometry, rescaled amplitudes
    // and shifted tail, so families correlate without coinciding. Family 0
    // is the unwarped reference so its amplitude code is exact.
    const double fam_scale =
        family == 0 ? 1.0 : 1.0 + 0.15 * std::sin(phi + 0.8 * family);
    KeyTemplate t{};
    t.amp[0] = (0.40 + 0.40 * q1) * fam_scale;
    t.amp[1] = (0.40 + 0.40 * q2) * fam_scale;
    t.amp[2] = (0.40 + 0.40 * q3) * fam_scale;
    t.amp[3] = (0.80 + 0.30 * std::cos(2.0 * phi + 0.5)) * fam_scale;
    t.amp[4] = (0.80 + 0.30 * std::sin(3.0 * phi + 2.0)) * fam_scale;
    t.amp[5] = (0.80 + 0.30 * std::cos(phi + 1.7)) * fam_scale;
    t.width_ms = duration_ms;
    t.accel_width_ms = 1.5 * duration_ms;
    t.tail_amp = 0.30;
    t.tail_off_ms = ((key % 5 - 2) * 10.0 + 4.0 * family) * 1.5;
    t.tail_width_ms = 0.9 * duration_ms;
    return t;
}

double raised_cosine(double dt_ms, double width_ms) {
    const double half = width_ms / 2.0;
    if (std::abs(dt_ms) >= half) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * dt_ms / half));
}

// Clean (noise-free, gravity-free) value of one channel at absolute time t.
double clean_value(const std::vector<std::int64_t>& centers,
                   const std::vector<KeyTemplate>& templates,
                   const std::vector<int>& keys, int axis, double t_ms) {
    double v = 0.0;
    // Keystrokes are far apart relative to their width; find the neighbours
    // around t instead of summing everything.
    auto it = std::lower_bound(centers.begin(), centers.end(),
                               static_cast<std::int64_t>(t_ms) - 400);
    for (; it != centers.end(); ++it) {
        const double dt = t_ms - static_cast<double>(*it);
        if (dt < -400.0) break;
        const auto i = static_cast<std::size_t>(it - centers.begin());
        const KeyTemplate& kt = templates[static_cast<std::size_t>(keys[i])];
        const double width = axis < 3 ? kt.width_ms : kt.accel_width_ms;
        double bump = kt.amp[axis] * raised_cosine(dt, width);
        // The rebound bump lives on the accelerometer only, so the gyroscope
        // mean signal peaks exactly at the keystroke center.
        if (axis >= 3)
            bump += kt.amp[axis] * kt.tail_amp *
                    raised_cosine(dt - kt.tail_off_ms, kt.tail_width_ms);
        v += bump;
    }
    return v;
}

double channel_rms(const std::vector<std::int64_t>& centers,
                   const std::vector<KeyTemplate>& templates,
                   const std::vector<int>& keys, int axis,
                   std::int64_t t0, std::int64_t t1) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::int64_t t = t0; t <= t1; t += 5) {
        const double v = clean_value(centers, templates, keys, axis,
                                     static_cast<double>(t));
        sum += v * v;
        ++n;
    }
    return n == 0 ? 0.0 : std::sqrt(sum / static_cast<double>(n));
}

TriaxialSeries sample_sensor(SensorKind sensor, double nominal_delay_ms,
                             std::int64_t t0, std::int64_t t1,
                             const std::vector<std::int64_t>& centers,
                             const std::vector<KeyTemplate>& templates,
                             const std::vector<int>& keys,
                             const SynthConfig& config, Rng& rng) {
    const int axis_base = sensor == SensorKind::Gyroscope ? 0 : 3;
    double noise_std[3] = {0.0, 0.0, 0.0};
    if (std::isfinite(config.snr)) {
        for (int a = 0; a < 3; ++a)
            noise_std[a] =
                channel_rms(centers, templates, keys, axis_base + a, t0, t1) / config.snr;
    }

    TriaxialSeries out;
    double t_acc = 0.0;
    std::int64_t prev = t0 - 1;
    while (true) {
        std::int64_t t = t0 + static_cast<std::int64_t>(std::llround(t_acc));
        if (t <= prev) t = prev + 1;
        if (t > t1) break;
        double v[3];
        for (int a = 0; a < 3; ++a) {
            v[a] = clean_value(centers, templates, keys, axis_base + a,
                               static_cast<double>(t));
            if (noise_std[a] > 0.0) v[a] += noise_std[a] * rng.normal();
        }
        if (sensor == SensorKind::Accelerometer) v[2] += kGravity;
        out.push_back({t, v[0], v[1], v[2], sensor});
        prev = t;
        const double u = 2.0 * rng.next_double() - 1.0;
        t_acc += nominal_delay_ms * (1.0 + config.sampling_jitter * u);
    }
    return out;
}

}  // namespace

void SynthConfig::validate() const {
    if (alphabet.size() == 0) throw std::invalid_argument("synth: empty alphabet");
    if (instances_per_key <= 0)
        throw std::invalid_argument("synth: instances_per_key must be positive");
    if (gap_ms <= keystroke_duration_ms + 2 * gap_jitter_ms)
        throw std::invalid_argument("synth: gap too small for keystroke duration");
    if (keystroke_duration_ms < 20)
        throw std::invalid_argument("synth: keystroke duration too short");
    if (!(snr > 0.0)) throw std::invalid_argument("synth: snr must be positive");
    if (sampling_jitter < 0.0 || sampling_jitter >= 1.0)
        throw std::invalid_argument("synth: sampling_jitter must be in [0, 1)");
}

SynthConfig noiseless(SynthConfig config) {
    config.snr = std::numeric_limits<double>::infinity();
    config.sampling_jitter = 0.0;
    return config;
}

RecordingSession generate_session(const SynthConfig& config) {
    config.validate();
    const int key_count = static_cast<int>(config.alphabet.size());
    Rng rng(config.seed);

    std::vector<int> keys;
    keys.reserve(static_cast<std::size_t>(key_count) * config.instances_per_key);
    for (int k = 0; k < key_count; ++k)
        for (int i = 0; i < config.instances_per_key; ++i) keys.push_back(k);
    rng.shuffle(keys);

    // Keystroke centres land on the nominal gyroscope sampling phase so an
    // unjittered stream samples each bump exactly at its peak.
    std::vector<std::int64_t> centers;
    centers.reserve(keys.size());
    std::int64_t c = kEpochBaseMs;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        const double u = 2.0 * rng.next_double() - 1.0;
        std::int64_t gap = config.gap_ms +
                           static_cast<std::int64_t>(std::llround(config.gap_jitter_ms * u));
        gap = (gap / kGyroDelayMs) * kGyroDelayMs;
        c += gap;
        centers.push_back(c);
    }

    std::vector<KeyTemplate> templates;
    templates.reserve(static_cast<std::size_t>(key_count));
    for (int k = 0; k < key_count; ++k)
        templates.push_back(make_template(k, key_count, config.template_family,
                                          static_cast<double>(config.keystroke_duration_ms)));

    const std::int64_t t0 = kEpochBaseMs;
    const std::int64_t t1 = centers.back() + config.gap_ms / 2;

    RecordingSession session;
    session.id = "synth-" + std::to_string(config.seed) + "-f" +
                 std::to_string(config.template_family);
    session.gyroscope =
        sample_sensor(SensorKind::Gyroscope, static_cast<double>(kGyroDelayMs), t0, t1,
                      centers, templates, keys, config, rng);
    session.accelerometer = sample_sensor(SensorKind::Accelerometer, kAccelDelayMs, t0,
                                          t1, centers, templates, keys, config, rng);
    session.labels.reserve(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i)
        session.labels.push_back(
            {centers[i], config.alphabet.symbol_at(static_cast<std::size_t>(keys[i]))});
    return session;
}

std::pair<RecordingSession, RecordingSession> generate_pair(const SynthConfig& config,
                                                            int second_family) {
    if (second_family == config.template_family)
        throw std::invalid_argument("synth: pair families must differ");
    SynthConfig second = config;
    second.template_family = second_family;
    second.seed = Rng::derive(config.seed, 0xB);
    return {generate_session(config), generate_session(second)};
}

}  // namespace wristlog
