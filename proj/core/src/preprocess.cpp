#include "wristlog/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace wristlog {

namespace {

double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

/// Expand a polynomial from its complex roots; returns real coefficients
/// in descending powers of z^-1 ordering convention used below.
std::vector<double> poly_from_roots(const std::vector<std::complex<double>>& roots) {
    std::vector<std::complex<double>> coeff{1.0};
    for (const auto& r : roots) {
        std::vector<std::complex<double>> next(coeff.size() + 1, 0.0);
        for (std::size_t i = 0; i < coeff.size(); ++i) {
            next[i] += coeff[i];
            next[i + 1] -= coeff[i] * r;
        }
        coeff = std::move(next);
    }
    std::vector<double> real(coeff.size());
    for (std::size_t i = 0; i < coeff.size(); ++i) real[i] = coeff[i].real();
    return real;
}

double polyval_at(const std::vector<double>& coeff, double z) {
    // coeff[k] multiplies z^-k; evaluate at a real z on the unit circle (1 or -1).
    double acc = 0.0;
    double p = 1.0;
    for (double c : coeff) {
        acc += c * p;
        p *= 1.0 / z;
    }
    return acc;
}

struct FilterCoefficients {
    std::vector<double> b;  // numerator, b[0] + b[1] z^-1 + ...
    std::vector<double> a;  // denominator, a[0] = 1
};

FilterCoefficients design_butterworth(FilterKind kind, double cutoff_hz, double sample_rate_hz,
                                      int order) {
    const double nyquist = sample_rate_hz / 2.0;
    if (cutoff_hz <= 0.0 || cutoff_hz >= nyquist)
        throw std::invalid_argument("cutoff must lie strictly inside (0, Nyquist)");
    if (order < 1) throw std::invalid_argument("filter order must be >= 1");

    // Pre-warped analog cutoff for the bilinear transform.
    const double warped = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);

    std::vector<std::complex<double>> zpoles;
    zpoles.reserve(static_cast<std::size_t>(order));
    for (int k = 1; k <= order; ++k) {
        const double theta =
            std::numbers::pi * (2.0 * k + order - 1.0) / (2.0 * order);
        std::complex<double> s(std::cos(theta), std::sin(theta));  // unit-circle LHP pole
        std::complex<double> p = (kind == FilterKind::LowPass) ? warped * s : warped / s;
        zpoles.push_back((1.0 + p) / (1.0 - p));
    }

    FilterCoefficients c;
    c.a = poly_from_roots(zpoles);

    // Zeros at z = -1 for low-pass, z = +1 for high-pass.
    const double zero = (kind == FilterKind::LowPass) ? -1.0 : 1.0;
    c.b = poly_from_roots(std::vector<std::complex<double>>(static_cast<std::size_t>(order), zero));

    // Normalize the passband edge: unit gain at DC (low-pass) or Nyquist (high-pass).
    const double ref = (kind == FilterKind::LowPass) ? 1.0 : -1.0;
    const double gain = polyval_at(c.a, ref) / polyval_at(c.b, ref);
    for (double& v : c.b) v *= gain;
    return c;
}

std::vector<double> apply_filter(const FilterCoefficients& c, const std::vector<double>& in) {
    // Direct form II transposed, zero initial state.
    const std::size_t n = c.a.size();
    std::vector<double> state(n - 1, 0.0);
    std::vector<double> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const double xn = in[i];
        const double yn = c.b[0] * xn + state[0];
        for (std::size_t k = 1; k < n - 1; ++k)
            state[k - 1] = c.b[k] * xn + state[k] - c.a[k] * yn;
        state[n - 2] = c.b[n - 1] * xn - c.a[n - 1] * yn;
        out[i] = yn;
    }
    return out;
}

void apply_per_axis(TriaxialSeries& series, const auto& fn) {
    for (int a = 0; a < 3; ++a) series.axis(a) = fn(series.axis(a));
}

}  // namespace

void PreprocessConfig::validate() const {
    auto check_window = [](int w, const char* name) {
        if (w < 1 || w % 2 == 0)
            throw std::invalid_argument(std::string(name) + " must be odd and >= 1");
    };
    check_window(median_window_gyro, "median_window_gyro");
    check_window(median_window_accel, "median_window_accel");
    if (gyro_sampling_delay_us <= 0 || accel_sampling_delay_us <= 0)
        throw std::invalid_argument("sampling delays must be positive");
    const double gyro_nyquist = sampling_frequency(gyro_sampling_delay_us) / 2.0;
    const double accel_nyquist = sampling_frequency(accel_sampling_delay_us) / 2.0;
    if (gyro_lowpass_cutoff_hz <= 0 || gyro_lowpass_cutoff_hz >= gyro_nyquist)
        throw std::invalid_argument("gyro low-pass cutoff outside (0, Nyquist)");
    if (accel_highpass_cutoff_hz <= 0 || accel_highpass_cutoff_hz >= accel_nyquist)
        throw std::invalid_argument("accel high-pass cutoff outside (0, Nyquist)");
    if (butterworth_order < 1) throw std::invalid_argument("butterworth_order must be >= 1");
    if (kalman_q <= 0 || kalman_r <= 0) throw std::invalid_argument("kalman q, r must be > 0");
}

TriaxialSeries calibrate(const TriaxialSeries& series) {
    if (series.empty()) throw std::invalid_argument("calibrate: empty series");
    TriaxialSeries out = series;
    apply_per_axis(out, [](const std::vector<double>& v) {
        const double m = mean(v);
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i] - m;
        return r;
    });
    return out;
}

std::vector<double> median_filter(const std::vector<double>& values, int w) {
    if (w < 1 || w % 2 == 0) throw std::invalid_argument("median window must be odd and >= 1");
    if (w == 1 || values.empty()) return values;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(values.size());
    const std::ptrdiff_t half = w / 2;
    std::vector<double> out(values.size());
    std::vector<double> window(static_cast<std::size_t>(w));
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (std::ptrdiff_t k = -half; k <= half; ++k) {
            std::ptrdiff_t j = std::clamp<std::ptrdiff_t>(i + k, 0, n - 1);  // edge replication
            window[static_cast<std::size_t>(k + half)] = values[static_cast<std::size_t>(j)];
        }
        auto mid = window.begin() + half;
        std::nth_element(window.begin(), mid, window.end());
        out[static_cast<std::size_t>(i)] = *mid;
    }
    return out;
}

double sampling_frequency(double delay_us) {
    if (delay_us <= 0.0) throw std::invalid_argument("sampling delay must be > 0");
    return 1.0 / (delay_us * 1e-6);
}

std::vector<double> butterworth(const std::vector<double>& values, FilterKind kind,
                                double cutoff_hz, double sample_rate_hz, int order) {
    if (values.size() <= static_cast<std::size_t>(3 * order))
        throw std::invalid_argument("sequence too short for filter order");
    return apply_filter(design_butterworth(kind, cutoff_hz, sample_rate_hz, order), values);
}

std::vector<double> kalman_smooth(const std::vector<double>& values, double q, double r) {
    if (q <= 0.0 || r <= 0.0) throw std::invalid_argument("kalman q, r must be > 0");
    if (values.empty()) throw std::invalid_argument("kalman_smooth: empty sequence");
    std::vector<double> out(values.size());
    double estimate = values[0];
    double variance = r;
    out[0] = estimate;
    for (std::size_t i = 1; i < values.size(); ++i) {
        variance += q;
        const double gain = variance / (variance + r);
        estimate += gain * (values[i] - estimate);
        variance *= 1.0 - gain;
        out[i] = estimate;
    }
    return out;
}

std::vector<double> normalize(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("normalize: empty sequence");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<double> out(values.size());
    if (lo == hi) return out;  // constant input -> zeros
    const double scale = 2.0 / (hi - lo);
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) * scale - 1.0;
    return out;
}

RecordingSession preprocess_pipeline(const RecordingSession& session,
                                     const PreprocessConfig& config, PipelineMode mode) {
    config.validate();
    RecordingSession out = session;
    out.gyroscope = calibrate(session.gyroscope);
    out.accelerometer = calibrate(session.accelerometer);
    if (mode == PipelineMode::CalibrationOnly) return out;

    const double gyro_fs = sampling_frequency(config.gyro_sampling_delay_us);
    const double accel_fs = sampling_frequency(config.accel_sampling_delay_us);

    apply_per_axis(out.gyroscope, [&](const std::vector<double>& v) {
        auto r = median_filter(v, config.median_window_gyro);
        r = butterworth(r, FilterKind::LowPass, config.gyro_lowpass_cutoff_hz, gyro_fs,
                        config.butterworth_order);
        r = kalman_smooth(r, config.kalman_q, config.kalman_r);
        return normalize(r);
    });
    apply_per_axis(out.accelerometer, [&](const std::vector<double>& v) {
        auto r = median_filter(v, config.median_window_accel);
        r = butterworth(r, FilterKind::HighPass, config.accel_highpass_cutoff_hz, accel_fs,
                        config.butterworth_order);
        r = kalman_smooth(r, config.kalman_q, config.kalman_r);
        return normalize(r);
    });
    return out;
}

}  // namespace wristlog
