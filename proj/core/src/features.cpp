#include "wristlog/features.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wristlog {

FeatureKind feature_kind_from_string(const std::string& name) {
    if (name == "statistical") return FeatureKind::Statistical;
    if (name == "segment") return FeatureKind::Segment;
    throw std::invalid_argument("unknown feature kind: " + name);
}

const char* to_string(FeatureKind kind) {
    return kind == FeatureKind::Statistical ? "statistical" : "segment";
}

std::size_t FeatureMatrix::target_index(std::size_t row) const {
    const auto& t = targets.at(row);
    return static_cast<std::size_t>(
        std::max_element(t.begin(), t.end()) - t.begin());
}

ColumnNormalizer ColumnNormalizer::fit(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("normalizer: no rows");
    ColumnNormalizer n;
    const std::size_t dim = rows[0].size();
    n.lo.assign(dim, std::numeric_limits<double>::infinity());
    n.hi.assign(dim, -std::numeric_limits<double>::infinity());
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < dim; ++c) {
            n.lo[c] = std::min(n.lo[c], row[c]);
            n.hi[c] = std::max(n.hi[c], row[c]);
        }
    }
    return n;
}

std::vector<double> ColumnNormalizer::apply(const std::vector<double>& row) const {
    if (row.size() != lo.size()) throw std::invalid_argument("normalizer: dimension mismatch");
    std::vector<double> out(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
        out[c] = (hi[c] == lo[c]) ? 0.0 : 2.0 * (row[c] - lo[c]) / (hi[c] - lo[c]) - 1.0;
    }
    return out;
}

std::vector<std::vector<double>> ColumnNormalizer::apply_all(
    const std::vector<std::vector<double>>& rows) const {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(apply(r));
    return out;
}

std::array<double, 8> statistical_vector(const std::vector<double>& values,
                                         double peak_threshold) {
    if (values.size() < 2) throw std::invalid_argument("statistical_vector: need >= 2 samples");
    const double n = static_cast<double>(values.size());

    double lo = values[0], hi = values[0], sum = 0.0, sq = 0.0, peak_abs = 0.0;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
        sq += v * v;
        peak_abs = std::max(peak_abs, std::abs(v));
    }
    const double mean = sum / n;
    const double rms = std::sqrt(sq / n);

    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : values) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    double skewness = 0.0, kurtosis = 0.0;
    if (m2 > 0.0) {
        skewness = m3 / std::pow(m2, 1.5);
        kurtosis = m4 / (m2 * m2);
    }

    double peak_count = 0.0, crest = 0.0;
    if (rms > 0.0) {
        peak_count = static_cast<double>(detect_peaks(papr(values), peak_threshold).size());
        crest = peak_abs / rms;
    }

    return {lo, hi, rms, peak_count, crest, skewness, kurtosis, m2};
}

FeatureMatrix build_statistical_features(const std::vector<Segment>& segments,
                                         const LabelCodebook& codebook, double peak_threshold) {
    FeatureMatrix m;
    m.codebook = codebook;
    m.kind = FeatureKind::Statistical;
    for (const auto& seg : segments) {
        if (seg.frames.empty() || seg.frames[0].size() != 6)
            throw std::invalid_argument("statistical features require 6-channel (G3A3) frames");
        std::vector<double> row;
        row.reserve(48);
        for (int channel = 0; channel < 6; ++channel) {
            std::vector<double> axis(seg.frames.size());
            for (std::size_t t = 0; t < seg.frames.size(); ++t)
                axis[t] = seg.frames[t][static_cast<std::size_t>(channel)];
            for (double s : statistical_vector(axis, peak_threshold)) row.push_back(s);
        }
        m.rows.push_back(std::move(row));
        m.targets.push_back(seg.label ? encode_label(*seg.label, codebook)
                                      : std::vector<double>(codebook.size(), 0.0));
    }
    return m;
}

FeatureMatrix build_segment_features(const std::vector<Segment>& segments,
                                     const LabelCodebook& codebook) {
    FeatureMatrix m;
    m.codebook = codebook;
    m.kind = FeatureKind::Segment;
    std::size_t frame_count = 0;
    for (const auto& seg : segments) {
        if (seg.frames.empty()) throw std::invalid_argument("empty segment");
        if (m.frame_dim == 0) {
            m.frame_dim = static_cast<int>(seg.frames[0].size());
            frame_count = seg.frames.size();
        }
        if (seg.frames.size() != frame_count ||
            seg.frames[0].size() != static_cast<std::size_t>(m.frame_dim))
            throw std::invalid_argument("inconsistent segment lengths");
        std::vector<double> row;
        row.reserve(frame_count * static_cast<std::size_t>(m.frame_dim));
        for (const auto& frame : seg.frames)
            row.insert(row.end(), frame.begin(), frame.end());
        m.rows.push_back(std::move(row));
        m.targets.push_back(seg.label ? encode_label(*seg.label, codebook)
                                      : std::vector<double>(codebook.size(), 0.0));
    }
    return m;
}

std::vector<double> encode_label(const std::string& symbol, const LabelCodebook& codebook) {
    std::vector<double> one_hot(codebook.size(), 0.0);
    one_hot[codebook.index_of(symbol)] = 1.0;
    return one_hot;
}

std::string decode_label(const std::vector<double>& one_hot, const LabelCodebook& codebook) {
    if (one_hot.size() != codebook.size())
        throw std::invalid_argument("one-hot length does not match codebook");
    auto it = std::max_element(one_hot.begin(), one_hot.end());
    return codebook.symbol_at(static_cast<std::size_t>(it - one_hot.begin()));
}

}  // namespace wristlog
