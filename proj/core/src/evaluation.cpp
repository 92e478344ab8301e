#include "wristlog/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wristlog/rng.hpp"

namespace wristlog {

namespace {

struct MeanStd {
    double mean = 0.0;
    double stddev = 0.0;  // population form
};

MeanStd mean_std(const std::vector<double>& values) {
    MeanStd r;
    const double n = static_cast<double>(values.size());
    r.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double var = 0.0;
    for (double v : values) var += (v - r.mean) * (v - r.mean);
    r.stddev = std::sqrt(var / n);
    return r;
}

NetworkModel build_model(const ModelSpec& spec, const FeatureMatrix& features) {
    const int input_dim = static_cast<int>(features.rows.at(0).size());
    const int output_dim = static_cast<int>(features.codebook.size());
    NetworkModel model;
    if (spec.arch == Architecture::RnnLstm || spec.arch == Architecture::RnnLstmPeephole) {
        if (features.frame_dim <= 0)
            throw std::invalid_argument("recurrent models require segment features");
        model = make_model(spec.arch, features.frame_dim, spec.hidden_units, output_dim);
    } else {
        model = make_model(spec.arch, input_dim, spec.hidden_units, output_dim);
    }
    model.codebook = features.codebook;
    model.feature_kind = features.kind;
    if (features.frame_dim > 0) model.frame_dim = features.frame_dim;
    return model;
}

struct EvaluatedSplit {
    ConfusionMatrix confusion;
    double mean_reliability = 0.0;
};

EvaluatedSplit evaluate_rows(const NetworkModel& model, const std::vector<Vector>& rows,
                             const std::vector<std::vector<double>>& targets,
                             const std::vector<std::size_t>& indices) {
    EvaluatedSplit result;
    result.confusion = ConfusionMatrix(model.codebook.size());
    double rel_sum = 0.0;
    for (std::size_t idx : indices) {
        Prediction p = predict(model, rows[idx]);
        const auto& t = targets[idx];
        std::size_t truth = static_cast<std::size_t>(
            std::max_element(t.begin(), t.end()) - t.begin());
        result.confusion.add(truth, model.codebook.index_of(p.label));
        rel_sum += reliability(p.distribution);
    }
    result.mean_reliability = rel_sum / static_cast<double>(indices.size());
    return result;
}

void finalize_report(EvaluationReport& report) {
    std::vector<double> f1s, rels;
    for (const auto& f : report.folds) {
        f1s.push_back(f.f1);
        rels.push_back(f.reliability);
    }
    auto f1 = mean_std(f1s);
    auto rel = mean_std(rels);
    report.f1_mean = f1.mean;
    report.f1_stddev = f1.stddev;
    report.reliability_mean = rel.mean;
    report.reliability_stddev = rel.stddev;
}

}  // namespace

DataScheme scheme_from_string(const std::string& name) {
    std::string n;
    for (char c : name) n += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (n == "p-t" || n == "pt") return DataScheme::PT;
    if (n == "p-h" || n == "ph") return DataScheme::PH;
    if (n == "r-t" || n == "rt") return DataScheme::RT;
    if (n == "r-h" || n == "rh") return DataScheme::RH;
    throw std::invalid_argument("unknown data scheme: " + name);
}

const char* to_string(DataScheme scheme) {
    switch (scheme) {
        case DataScheme::PT: return "P-T";
        case DataScheme::PH: return "P-H";
        case DataScheme::RT: return "R-T";
        case DataScheme::RH: return "R-H";
    }
    return "?";
}

bool scheme_preprocessed(DataScheme s) { return s == DataScheme::PT || s == DataScheme::PH; }
bool scheme_heuristic(DataScheme s) { return s == DataScheme::PH || s == DataScheme::RH; }

void ConfusionMatrix::add(std::size_t true_label, std::size_t predicted, std::size_t count) {
    if (true_label >= n_ || predicted >= n_)
        throw std::out_of_range("confusion matrix index out of range");
    counts_[true_label * n_ + predicted] += count;
}

std::size_t ConfusionMatrix::at(std::size_t true_label, std::size_t predicted) const {
    return counts_[true_label * n_ + predicted];
}

std::size_t ConfusionMatrix::total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::size_t{0});
}

void ConfusionMatrix::merge(const ConfusionMatrix& other) {
    if (n_ == 0) {
        *this = other;
        return;
    }
    if (other.n_ != n_) throw std::invalid_argument("confusion matrix size mismatch");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
}

double f1_score(const ConfusionMatrix& matrix) {
    if (matrix.total() == 0) throw std::invalid_argument("f1_score: empty confusion matrix");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t c = 0; c < matrix.classes(); ++c) {
        tp += matrix.at(c, c);
        for (std::size_t other = 0; other < matrix.classes(); ++other) {
            if (other == c) continue;
            fp += matrix.at(other, c);
            fn += matrix.at(c, other);
        }
    }
    const double p_den = static_cast<double>(tp + fp);
    const double r_den = static_cast<double>(tp + fn);
    if (p_den == 0.0 || r_den == 0.0) return 0.0;
    const double p = static_cast<double>(tp) / p_den;
    const double r = static_cast<double>(tp) / r_den;
    if (p == r) return p;  // harmonic mean of equal values, kept exact
    return (p + r == 0.0) ? 0.0 : 2.0 * p * r / (p + r);
}

double reliability(const Vector& distribution) {
    if (distribution.size() < 2) throw std::invalid_argument("reliability: need >= 2 classes");
    double sum = 0.0, entropy = 0.0;
    for (double y : distribution) {
        if (y < 0.0 || !std::isfinite(y))
            throw std::invalid_argument("reliability: invalid distribution entry");
        sum += y;
        if (y > 0.0) entropy -= y * std::log(y);
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw std::invalid_argument("reliability: distribution does not sum to 1");
    return 1.0 - entropy / std::log(static_cast<double>(distribution.size()));
}

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("kfold_split: k must be >= 2");
    if (static_cast<std::size_t>(k) > n) throw std::invalid_argument("kfold_split: k > n");
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), 0);
    Rng rng(seed);
    rng.shuffle(indices);

    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    const std::size_t base = n / static_cast<std::size_t>(k);
    const std::size_t extra = n % static_cast<std::size_t>(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::size_t size = base + (f < extra ? 1 : 0);
        folds[f].assign(indices.begin() + static_cast<std::ptrdiff_t>(pos),
                        indices.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return folds;
}

ModelSpec ModelSpec::standard(Architecture arch, int hidden_units) {
    FeatureKind kind =
        arch == Architecture::FnnSigmoid ? FeatureKind::Statistical : FeatureKind::Segment;
    return {arch, hidden_units, kind};
}

EvaluationReport cross_validate(const ModelSpec& spec, const FeatureMatrix& features, int k,
                                int epochs, std::uint64_t seed) {
    if (spec.features != features.kind)
        throw std::invalid_argument("feature kind does not match the model spec");
    const auto folds = kfold_split(features.size(), k, seed);

    EvaluationReport report;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        std::vector<std::size_t> train_idx;
        for (std::size_t other = 0; other < folds.size(); ++other)
            if (other != f)
                train_idx.insert(train_idx.end(), folds[other].begin(), folds[other].end());

        NetworkModel model = build_model(spec, features);

        std::vector<Vector> rows = features.rows;
        if (features.kind == FeatureKind::Statistical) {
            std::vector<Vector> train_rows;
            for (std::size_t idx : train_idx) train_rows.push_back(features.rows[idx]);
            model.normalizer = ColumnNormalizer::fit(train_rows);
            model.has_normalizer = true;
            rows = model.normalizer.apply_all(features.rows);
        }

        std::vector<Vector> train_rows, train_targets;
        for (std::size_t idx : train_idx) {
            train_rows.push_back(rows[idx]);
            train_targets.push_back(features.targets[idx]);
        }

        TrainOptions options;
        options.epochs = epochs;
        options.seed = Rng::derive(seed, f);
        TrainResult trained = train(model, train_rows, train_targets, options);
        report.loss_traces.push_back(std::move(trained.epoch_loss));

        EvaluatedSplit split = evaluate_rows(model, rows, features.targets, folds[f]);
        report.folds.push_back({f1_score(split.confusion), split.mean_reliability});
        report.confusion.merge(split.confusion);
    }
    finalize_report(report);
    return report;
}

EvaluationReport train_and_evaluate(const ModelSpec& spec, const FeatureMatrix& train_set,
                                    const FeatureMatrix& eval_set, int epochs,
                                    std::uint64_t seed) {
    if (spec.features != train_set.kind || train_set.kind != eval_set.kind)
        throw std::invalid_argument("feature kind mismatch");

    NetworkModel model = build_model(spec, train_set);
    std::vector<Vector> train_rows = train_set.rows;
    std::vector<Vector> eval_rows = eval_set.rows;
    if (train_set.kind == FeatureKind::Statistical) {
        model.normalizer = ColumnNormalizer::fit(train_set.rows);
        model.has_normalizer = true;
        train_rows = model.normalizer.apply_all(train_set.rows);
        eval_rows = model.normalizer.apply_all(eval_set.rows);
    }

    TrainOptions options;
    options.epochs = epochs;
    options.seed = seed;
    TrainResult trained = train(model, train_rows, train_set.targets, options);

    std::vector<std::size_t> all(eval_rows.size());
    std::iota(all.begin(), all.end(), 0);
    EvaluatedSplit split = evaluate_rows(model, eval_rows, eval_set.targets, all);

    EvaluationReport report;
    report.loss_traces.push_back(std::move(trained.epoch_loss));
    report.folds.push_back({f1_score(split.confusion), split.mean_reliability});
    report.confusion = split.confusion;
    finalize_report(report);
    return report;
}

std::vector<Segment> heuristic_segments(const RecordingSession& raw_session,
                                        const FusedFrameSequence& frames,
                                        const PreprocessConfig& preprocess,
                                        const SegmentationConfig& segmentation,
                                        std::int64_t interval_ms) {
    const RecordingSession calibrated =
        preprocess_pipeline(raw_session, preprocess, PipelineMode::CalibrationOnly);
    const TriaxialSeries gyro =
        resample_constant_rate(calibrated.gyroscope, interval_ms);
    const int smoothing =
        static_cast<int>(segmentation.papr_smoothing_ms / std::max<std::int64_t>(1, interval_ms));
    return segment_by_peaks(frames, gyro, segmentation.half_window,
                            segmentation.peak_threshold, smoothing);
}

FeatureMatrix build_scheme_dataset(const RecordingSession& session, DataScheme scheme,
                                   FeatureKind kind, const ExperimentConfig& config) {
    const PipelineMode mode =
        scheme_preprocessed(scheme) ? PipelineMode::Full : PipelineMode::CalibrationOnly;
    RecordingSession cleaned = preprocess_pipeline(session, config.preprocess, mode);

    if (kind == FeatureKind::Statistical &&
        fused_dimension(config.fusion.strategy) != 6)
        throw std::invalid_argument("statistical features require the G3A3 fusion strategy");

    TriaxialSeries gyro = resample_constant_rate(cleaned.gyroscope, config.fusion.interval_ms);
    TriaxialSeries accel = align_accelerometer(cleaned.accelerometer, gyro.timestamps);
    FusedFrameSequence frames = fuse(gyro, accel, config.fusion);

    std::vector<Segment> segments;
    if (scheme_heuristic(scheme)) {
        segments = heuristic_segments(session, frames, config.preprocess,
                                      config.segmentation, config.fusion.interval_ms);
        segments = match_labels_to_peaks(segments, cleaned.labels,
                                         config.segmentation.match_tolerance_ms);
    } else {
        segments = segment_by_labels(frames, cleaned.labels, config.segmentation.half_window);
    }

    if (kind == FeatureKind::Statistical)
        return build_statistical_features(segments, config.codebook,
                                          config.segmentation.peak_threshold);
    return build_segment_features(segments, config.codebook);
}

namespace {

FeatureMatrix concat_datasets(const std::vector<RecordingSession>& sessions, DataScheme scheme,
                              FeatureKind kind, const ExperimentConfig& config) {
    FeatureMatrix all;
    for (const auto& s : sessions) {
        FeatureMatrix part = build_scheme_dataset(s, scheme, kind, config);
        if (all.rows.empty()) {
            all = std::move(part);
        } else {
            if (part.frame_dim != all.frame_dim || part.kind != all.kind)
                throw std::invalid_argument("sessions produce inconsistent feature shapes");
            all.rows.insert(all.rows.end(), part.rows.begin(), part.rows.end());
            all.targets.insert(all.targets.end(), part.targets.begin(), part.targets.end());
        }
    }
    if (all.rows.empty()) throw std::runtime_error("no labeled segments in dataset");
    return all;
}

}  // namespace

EvaluationReport run_experiment(DataScheme scheme, const ModelSpec& spec,
                                const std::vector<RecordingSession>& train_sessions,
                                const std::vector<RecordingSession>& eval_sessions,
                                const ExperimentConfig& config) {
    FeatureMatrix train_set = concat_datasets(train_sessions, scheme, spec.features, config);
    if (eval_sessions.empty())
        return cross_validate(spec, train_set, config.k, config.epochs, config.seed);
    FeatureMatrix eval_set = concat_datasets(eval_sessions, scheme, spec.features, config);
    return train_and_evaluate(spec, train_set, eval_set, config.transfer_epochs, config.seed);
}

NetworkModel fit_model(const ModelSpec& spec, const FeatureMatrix& features, int epochs,
                       std::uint64_t seed, std::vector<double>* loss_trace) {
    if (spec.features != features.kind)
        throw std::invalid_argument("feature kind does not match the model spec");
    NetworkModel model = build_model(spec, features);
    std::vector<Vector> rows = features.rows;
    if (features.kind == FeatureKind::Statistical) {
        model.normalizer = ColumnNormalizer::fit(features.rows);
        model.has_normalizer = true;
        rows = model.normalizer.apply_all(features.rows);
    }
    TrainOptions options;
    options.epochs = epochs;
    options.seed = seed;
    TrainResult trained = train(model, rows, features.targets, options);
    if (loss_trace) *loss_trace = std::move(trained.epoch_loss);
    return model;
}

}  // namespace wristlog
