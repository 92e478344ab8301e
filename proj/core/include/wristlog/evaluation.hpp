#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wristlog/features.hpp"
#include "wristlog/fusion.hpp"
#include "wristlog/network.hpp"
#include "wristlog/preprocess.hpp"
#include "wristlog/segmentation.hpp"
#include "wristlog/types.hpp"

namespace wristlog {

/// {pre-processed, raw} x {timestamp-based, heuristic} data preparation.
enum class DataScheme { PT, PH, RT, RH };

DataScheme scheme_from_string(const std::string& name);
const char* to_string(DataScheme scheme);
bool scheme_preprocessed(DataScheme scheme);
bool scheme_heuristic(DataScheme scheme);

/// Rows = true label, columns = predicted label.
class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::size_t classes) : n_(classes), counts_(classes * classes, 0) {}

    std::size_t classes() const { return n_; }
    void add(std::size_t true_label, std::size_t predicted, std::size_t count = 1);
    std::size_t at(std::size_t true_label, std::size_t predicted) const;
    std::size_t total() const;
    void merge(const ConfusionMatrix& other);

private:
    std::size_t n_ = 0;
    std::vector<std::size_t> counts_;
};

/// Micro-averaged F1 over classes (equals accuracy for single-label
/// multiclass); 0 when precision + recall is 0.
double f1_score(const ConfusionMatrix& matrix);

/// Entropy-based confidence: 1 - S / ln(n) with S the natural-log entropy
/// of the output distribution. 0 for uniform, 1 for one-hot.
double reliability(const Vector& distribution);

/// Seeded shuffle, then k folds of size floor(n/k) or ceil(n/k) forming a
/// partition of 0..n-1.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, int k, std::uint64_t seed);

struct ModelSpec {
    Architecture arch = Architecture::RnnLstm;
    int hidden_units = 128;
    FeatureKind features = FeatureKind::Segment;

    /// Conventional pairing: FNN-Sigmoid on statistical features, the rest
    /// on data segments.
    static ModelSpec standard(Architecture arch, int hidden_units = 128);
};

struct FoldResult {
    double f1 = 0.0;
    double reliability = 0.0;
};

struct EvaluationReport {
    double f1_mean = 0.0;
    double f1_stddev = 0.0;
    double reliability_mean = 0.0;
    double reliability_stddev = 0.0;
    std::vector<FoldResult> folds;
    ConfusionMatrix confusion;
    std::vector<std::vector<double>> loss_traces;  // one per trained model
};

/// Train one fresh model per fold and evaluate it on the held-out fold.
/// Statistical-feature normalization is fitted on training folds only.
EvaluationReport cross_validate(const ModelSpec& spec, const FeatureMatrix& features, int k,
                                int epochs, std::uint64_t seed);

/// Train on all rows and evaluate once on a separate set (Experiment 3
/// transfer mode). The evaluation rows reuse the training normalizer.
EvaluationReport train_and_evaluate(const ModelSpec& spec, const FeatureMatrix& train,
                                    const FeatureMatrix& eval, int epochs, std::uint64_t seed);

struct ExperimentConfig {
    PreprocessConfig preprocess;
    FusionConfig fusion;
    SegmentationConfig segmentation;
    LabelCodebook codebook = LabelCodebook::keypad12();
    int k = 5;
    int epochs = 100;
    int transfer_epochs = 200;
    std::uint64_t seed = 0x5EED;
};

/// Heuristic (unlabeled) segments of `frames`: keystroke peaks are located
/// on the calibrated-but-unfiltered gyroscope signal of the raw session, so
/// peak positions are unaffected by the causal filter lag of the full
/// pipeline, then windows are cut from `frames` at those grid indices.
std::vector<Segment> heuristic_segments(const RecordingSession& raw_session,
                                        const FusedFrameSequence& frames,
                                        const PreprocessConfig& preprocess,
                                        const SegmentationConfig& segmentation,
                                        std::int64_t interval_ms);

/// Apply a data scheme to one session: preprocessing gate, constant-rate
/// fusion, segmentation (timestamp or heuristic), feature extraction.
FeatureMatrix build_scheme_dataset(const RecordingSession& session, DataScheme scheme,
                                   FeatureKind kind, const ExperimentConfig& config);

/// The Chapter-6 experiment driver. With eval sessions: transfer mode, one
/// model trained on everything and evaluated once. Without: k-fold CV.
EvaluationReport run_experiment(DataScheme scheme, const ModelSpec& spec,
                                const std::vector<RecordingSession>& train_sessions,
                                const std::vector<RecordingSession>& eval_sessions,
                                const ExperimentConfig& config);

/// Fit a final model on the entire dataset (used by the train subcommand).
NetworkModel fit_model(const ModelSpec& spec, const FeatureMatrix& features, int epochs,
                       std::uint64_t seed, std::vector<double>* loss_trace = nullptr);

}  // namespace wristlog
