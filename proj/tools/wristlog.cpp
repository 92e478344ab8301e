// Command-line front end: every pipeline stage as a subcommand, driven by
// flags (optionally seeded from a config file; flags win).

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wristlog/evaluation.hpp"
#include "wristlog/features.hpp"
#include "wristlog/fusion.hpp"
#include "wristlog/model_io.hpp"
#include "wristlog/network.hpp"
#include "wristlog/preprocess.hpp"
#include "wristlog/segmentation.hpp"
#include "wristlog/server.hpp"
#include "wristlog/session_io.hpp"
#include "wristlog/synthgen.hpp"
#include "wristlog/types.hpp"

namespace {

using nlohmann::json;
using namespace wristlog;

std::atomic<bool> g_stop{false};

void add_preprocess_flags(CLI::App& cmd, PreprocessConfig& cfg) {
    cmd.add_option("--median-gyro", cfg.median_window_gyro, "Gyro median window (odd)");
    cmd.add_option("--median-accel", cfg.median_window_accel, "Accel median window (odd)");
    cmd.add_option("--gyro-delay-us", cfg.gyro_sampling_delay_us, "Gyro sampling delay, us");
    cmd.add_option("--accel-delay-us", cfg.accel_sampling_delay_us,
                   "Accel sampling delay, us");
    cmd.add_option("--gyro-cutoff", cfg.gyro_lowpass_cutoff_hz, "Gyro low-pass cutoff, Hz");
    cmd.add_option("--accel-cutoff", cfg.accel_highpass_cutoff_hz,
                   "Accel high-pass cutoff, Hz");
    cmd.add_option("--butterworth-order", cfg.butterworth_order, "Butterworth order");
    cmd.add_option("--kalman-q", cfg.kalman_q, "Kalman process variance");
    cmd.add_option("--kalman-r", cfg.kalman_r, "Kalman measurement variance");
}

void add_segmentation_flags(CLI::App& cmd, SegmentationConfig& cfg) {
    cmd.add_option("--half-window", cfg.half_window, "Frames either side of a center");
    cmd.add_option("--peak-threshold", cfg.peak_threshold, "Minimum keystroke PAPR");
    cmd.add_option("--match-tolerance-ms", cfg.match_tolerance_ms,
                   "Label-to-peak matching tolerance, ms");
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty()) return std::cout;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    return file;
}

json report_json(const EvaluationReport& report) {
    json folds = json::array();
    for (const FoldResult& f : report.folds)
        folds.push_back({{"f1", f.f1}, {"reliability", f.reliability}});
    return {{"f1_mean", report.f1_mean},
            {"f1_stddev", report.f1_stddev},
            {"reliability_mean", report.reliability_mean},
            {"reliability_stddev", report.reliability_stddev},
            {"folds", folds}};
}

FusionStrategy strategy_for_model(const NetworkModel& model, const std::string& flag) {
    if (model.feature_kind == FeatureKind::Statistical) return FusionStrategy::G3A3;
    const FusionStrategy s = fusion_strategy_from_string(flag);
    if (model.recurrent() && fused_dimension(s) != model.frame_dim)
        throw std::runtime_error(std::string("strategy ") + to_string(s) + " yields " +
                                 std::to_string(fused_dimension(s)) +
                                 "-dim frames but the model expects " +
                                 std::to_string(model.frame_dim));
    return s;
}

int cmd_serve(const std::string& out_dir, int tcp_port, int http_port) {
    AcquisitionServer server(out_dir, tcp_port, http_port);
    server.start();
    std::cout << "listening tcp=" << server.tcp_port() << " http=" << server.http_port()
              << " out=" << out_dir << std::endl;
    std::signal(SIGINT, [](int) { g_stop = true; });
    std::signal(SIGTERM, [](int) { g_stop = true; });
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    server.stop();
    return 0;
}

int cmd_synth(const SynthConfig& base, bool make_noiseless, int pair_family,
              const std::string& out_dir) {
    SynthConfig cfg = make_noiseless ? noiseless(base) : base;
    if (pair_family != cfg.template_family) {
        auto [a, b] = generate_pair(cfg, pair_family);
        write_session(a, std::filesystem::path(out_dir) / a.id);
        write_session(b, std::filesystem::path(out_dir) / b.id);
        std::cout << a.id << " " << a.labels.size() << " keystrokes\n"
                  << b.id << " " << b.labels.size() << " keystrokes\n";
    } else {
        const RecordingSession s = generate_session(cfg);
        write_session(s, std::filesystem::path(out_dir) / s.id);
        std::cout << s.id << " " << s.labels.size() << " keystrokes\n";
    }
    return 0;
}

int cmd_preprocess(const std::string& in_dir, const std::string& out_dir,
                   const PreprocessConfig& cfg, bool calibration_only) {
    const RecordingSession session = read_session(in_dir);
    const PipelineMode mode =
        calibration_only ? PipelineMode::CalibrationOnly : PipelineMode::Full;
    RecordingSession cleaned = preprocess_pipeline(session, cfg, mode);
    write_session(cleaned, out_dir);
    std::cout << "wrote " << out_dir << " (" << cleaned.gyroscope.size() << " gyro, "
              << cleaned.accelerometer.size() << " accel events)\n";
    return 0;
}

int cmd_segment(const std::string& in_dir, const std::string& scheme_name,
                const PreprocessConfig& pre, const SegmentationConfig& seg,
                const FusionConfig& fusion, const std::string& out_path) {
    const DataScheme scheme = scheme_from_string(scheme_name);
    const RecordingSession session = read_session(in_dir);
    const RecordingSession prepared = preprocess_pipeline(
        session, pre,
        scheme_preprocessed(scheme) ? PipelineMode::Full : PipelineMode::CalibrationOnly);
    const FusedFrameSequence frames = fuse_session(prepared, fusion);

    std::vector<Segment> segments;
    if (scheme_heuristic(scheme)) {
        segments = heuristic_segments(session, frames, pre, seg, fusion.interval_ms);
        segments = match_labels_to_peaks(segments, prepared.labels, seg.match_tolerance_ms);
    } else {
        segments = segment_by_labels(frames, prepared.labels, seg.half_window);
    }

    json rows = json::array();
    for (const Segment& s : segments) {
        json row = {{"center_index", s.center_index},
                    {"center_time_ms", s.center_time_ms},
                    {"frames", s.frames.size()}};
        if (s.label) row["label"] = *s.label;
        rows.push_back(row);
    }
    std::ofstream file;
    open_output(file, out_path) << json{{"scheme", to_string(scheme)},
                                        {"count", segments.size()},
                                        {"segments", rows}}
                                       .dump(2)
                                << "\n";
    return 0;
}

int cmd_features(const std::string& in_dir, const std::string& scheme_name,
                 const std::string& kind_name, const ExperimentConfig& cfg,
                 const std::string& out_path) {
    const DataScheme scheme = scheme_from_string(scheme_name);
    const FeatureKind kind = feature_kind_from_string(kind_name);
    const RecordingSession session = read_session(in_dir);
    const FeatureMatrix features = build_scheme_dataset(session, scheme, kind, cfg);

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    out << "label";
    const std::size_t width = features.rows.empty() ? 0 : features.rows.front().size();
    for (std::size_t c = 0; c < width; ++c) out << ",f" << c;
    out << "\n";
    for (std::size_t r = 0; r < features.size(); ++r) {
        out << features.codebook.symbol_at(features.target_index(r));
        char buf[32];
        for (double v : features.rows[r]) {
            std::snprintf(buf, sizeof buf, ",%.9g", v);
            out << buf;
        }
        out << "\n";
    }
    return 0;
}

int cmd_train(const std::string& in_dir, const std::string& scheme_name,
              const std::string& model_name, int hidden, int epochs,
              const ExperimentConfig& cfg, const std::string& out_path) {
    const DataScheme scheme = scheme_from_string(scheme_name);
    const ModelSpec spec = ModelSpec::standard(architecture_from_string(model_name), hidden);
    const RecordingSession session = read_session(in_dir);
    const FeatureMatrix features =
        build_scheme_dataset(session, scheme, spec.features, cfg);
    if (features.size() == 0) throw std::runtime_error("no labeled segments in session");

    std::vector<double> trace;
    const NetworkModel model = fit_model(spec, features, epochs, cfg.seed, &trace);
    save_model(model, out_path);
    std::cout << "trained " << model.topology_string() << " on " << features.size()
              << " segments, " << epochs << " epochs, final loss " << trace.back() << "\n"
              << "saved " << out_path << "\n";
    return 0;
}

int cmd_evaluate(const std::vector<std::string>& train_dirs,
                 const std::vector<std::string>& eval_dirs, const std::string& scheme_name,
                 const std::string& model_name, int hidden, const ExperimentConfig& cfg,
                 const std::string& out_path) {
    const DataScheme scheme = scheme_from_string(scheme_name);
    const ModelSpec spec = ModelSpec::standard(architecture_from_string(model_name), hidden);
    std::vector<RecordingSession> train, eval;
    for (const std::string& d : train_dirs) train.push_back(read_session(d));
    for (const std::string& d : eval_dirs) eval.push_back(read_session(d));

    const EvaluationReport report = run_experiment(scheme, spec, train, eval, cfg);
    json out = report_json(report);
    out["scheme"] = to_string(scheme);
    out["model"] = to_string(spec.arch);
    out["mode"] = eval.empty() ? "cross-validation" : "transfer";
    std::ofstream file;
    open_output(file, out_path) << out.dump(2) << "\n";
    return 0;
}

int cmd_infer(const std::string& model_path, const std::string& in_dir,
              const std::string& scheme_name, const std::string& strategy_flag,
              const PreprocessConfig& pre, const SegmentationConfig& seg,
              std::int64_t interval_ms, const std::string& out_path) {
    const DataScheme scheme = scheme_from_string(scheme_name);
    const NetworkModel model = load_model(model_path);
    const FusionConfig fusion{interval_ms, strategy_for_model(model, strategy_flag)};

    const RecordingSession session = read_session(in_dir);
    const RecordingSession prepared = preprocess_pipeline(
        session, pre,
        scheme_preprocessed(scheme) ? PipelineMode::Full : PipelineMode::CalibrationOnly);
    const FusedFrameSequence frames = fuse_session(prepared, fusion);
    const std::vector<Segment> segments =
        heuristic_segments(session, frames, pre, seg, fusion.interval_ms);

    const FeatureMatrix features =
        model.feature_kind == FeatureKind::Statistical
            ? build_statistical_features(segments, model.codebook, seg.peak_threshold)
            : build_segment_features(segments, model.codebook);

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    for (std::size_t r = 0; r < features.size(); ++r) {
        const std::size_t width = features.rows[r].size();
        const bool ok = model.recurrent()
                            ? model.frame_dim > 0 &&
                                  width % static_cast<std::size_t>(model.frame_dim) == 0
                            : width == static_cast<std::size_t>(model.input_dim);
        if (!ok)
            throw std::runtime_error("segment feature width " + std::to_string(width) +
                                     " does not match model input " +
                                     std::to_string(model.input_dim));
        const Prediction p = predict_raw(model, features.rows[r]);
        out << json{{"label", p.label},
                    {"distribution", p.distribution},
                    {"reliability", reliability(p.distribution)}}
                   .dump()
            << "\n";
    }
    return 0;
}

int cmd_benchmark_fusion(const std::string& in_dir, const std::string& scheme_name,
                         int hidden, ExperimentConfig cfg, const std::string& out_path) {
    const DataScheme scheme = scheme_from_string(scheme_name);
    RecordingSession session;
    if (in_dir.empty()) {
        // Default toy workload: 4 labels x 30 keystrokes, noiseless.
        SynthConfig synth = noiseless({});
        synth.seed = cfg.seed;
        synth.alphabet = LabelCodebook({"1", "2", "3", "4"});
        synth.instances_per_key = 30;
        session = generate_session(synth);
    } else {
        session = read_session(in_dir);
    }
    LabelCodebook codebook = LabelCodebook::from_labels(session.labels);
    if (codebook.size() != 4)
        throw std::runtime_error("fusion benchmark expects a 4-label dataset, got " +
                                 std::to_string(codebook.size()) + " labels");
    cfg.codebook = codebook;

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    out << "strategy,f1,reliability\n";
    for (FusionStrategy strategy : all_fusion_strategies()) {
        cfg.fusion.strategy = strategy;
        const FeatureMatrix features =
            build_scheme_dataset(session, scheme, FeatureKind::Segment, cfg);
        ModelSpec spec;
        spec.arch = Architecture::RnnLstm;
        spec.hidden_units = hidden;
        spec.features = FeatureKind::Segment;
        // Memorization benchmark: evaluation on the training set itself.
        const EvaluationReport report =
            train_and_evaluate(spec, features, features, cfg.epochs, cfg.seed);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s,%.4f,%.4f", to_string(strategy), report.f1_mean,
                      report.reliability_mean);
        out << buf << "\n";
        out.flush();
    }
    return 0;
}

int cmd_benchmark_models(const std::string& in_dir, const std::string& scheme_name,
                         int hidden, ExperimentConfig cfg, const std::string& out_path) {
    const DataScheme scheme = scheme_from_string(scheme_name);
    RecordingSession session;
    if (in_dir.empty()) {
        // Default toy workload: 4 labels x 30 keystrokes, noiseless.
        SynthConfig synth = noiseless({});
        synth.seed = cfg.seed;
        synth.alphabet = LabelCodebook({"1", "2", "3", "4"});
        synth.instances_per_key = 30;
        session = generate_session(synth);
    } else {
        session = read_session(in_dir);
    }
    cfg.codebook = LabelCodebook::from_labels(session.labels);

    struct Row {
        const char* tag;
        Architecture arch;
        FeatureKind features;
    };
    const Row rows[] = {
        {"A", Architecture::FnnSigmoid, FeatureKind::Statistical},
        {"B", Architecture::FnnTanh, FeatureKind::Statistical},
        {"C", Architecture::FnnSigmoid, FeatureKind::Segment},
        {"D", Architecture::FnnTanh, FeatureKind::Segment},
        {"E", Architecture::RnnLstm, FeatureKind::Segment},
        {"F", Architecture::RnnLstmPeephole, FeatureKind::Segment},
    };

    std::ofstream file;
    std::ostream& out = open_output(file, out_path);
    out << "row,model,features,f1_mean,f1_stddev,reliability_mean,reliability_stddev\n";
    for (const Row& row : rows) {
        const FeatureMatrix features =
            build_scheme_dataset(session, scheme, row.features, cfg);
        ModelSpec spec;
        spec.arch = row.arch;
        spec.hidden_units = hidden;
        spec.features = row.features;
        const EvaluationReport report =
            cross_validate(spec, features, cfg.k, cfg.epochs, cfg.seed);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s,%s,%s,%.4f,%.4f,%.4f,%.4f", row.tag,
                      to_string(row.arch), to_string(row.features), report.f1_mean,
                      report.f1_stddev, report.reliability_mean,
                      report.reliability_stddev);
        out << buf << "\n";
        out.flush();
    }
    return 0;
}

int cmd_replay(const std::string& in_dir, const std::string& host, int tcp_port,
               int http_port, std::size_t batch_size) {
    replay_session(in_dir, host, tcp_port, http_port, batch_size);
    std::cout << "replayed " << in_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wrist-motion keystroke inference pipeline"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read defaults from a TOML/INI config file");

    ExperimentConfig cfg;
    app.add_option("--seed", cfg.seed, "Global RNG seed")->configurable(true);

    // serve
    std::string serve_out = "sessions";
    int tcp_port = 9000, http_port = 9001;
    auto* serve = app.add_subcommand("serve", "Run the acquisition server");
    serve->add_option("--out", serve_out, "Directory for persisted sessions");
    serve->add_option("--tcp-port", tcp_port, "TCP port (0 = ephemeral)");
    serve->add_option("--http-port", http_port, "HTTP port (0 = ephemeral)");

    // synth
    SynthConfig synth_cfg;
    bool synth_noiseless = false;
    int pair_family = 0;
    std::string synth_out = "sessions";
    auto* synth = app.add_subcommand("synth", "Generate a synthetic session");
    synth->add_option("--out", synth_out, "Output directory");
    synth->add_option("--instances", synth_cfg.instances_per_key, "Keystrokes per key");
    synth->add_option("--snr", synth_cfg.snr, "Clean-signal RMS over noise std");
    synth->add_option("--jitter", synth_cfg.sampling_jitter, "Sampling-delay jitter [0,1)");
    synth->add_option("--family", synth_cfg.template_family, "Keypad template family");
    synth->add_option("--pair-family", pair_family,
                      "Also generate a second session of this family");
    synth->add_flag("--noiseless", synth_noiseless, "Disable noise and jitter");

    // preprocess
    std::string in_dir, out_dir = "processed", out_path;
    bool calibration_only = false;
    auto* pre = app.add_subcommand("preprocess", "Clean a stored session");
    pre->add_option("--in", in_dir, "Session directory")->required();
    pre->add_option("--out", out_dir, "Output session directory");
    pre->add_flag("--calibration-only", calibration_only, "Skip everything but calibration");
    add_preprocess_flags(*pre, cfg.preprocess);

    // segment
    std::string scheme_name = "p-t";
    auto* seg = app.add_subcommand("segment", "Extract keystroke segments");
    seg->add_option("--in", in_dir, "Session directory")->required();
    seg->add_option("--scheme", scheme_name, "Data scheme: p-t, p-h, r-t, r-h");
    seg->add_option("--out", out_path, "Output JSON file (default stdout)");
    seg->add_option("--interval-ms", cfg.fusion.interval_ms, "Resampling interval, ms");
    add_preprocess_flags(*seg, cfg.preprocess);
    add_segmentation_flags(*seg, cfg.segmentation);

    // features
    std::string kind_name = "segment";
    auto* feat = app.add_subcommand("features", "Emit feature rows as CSV");
    feat->add_option("--in", in_dir, "Session directory")->required();
    feat->add_option("--scheme", scheme_name, "Data scheme: p-t, p-h, r-t, r-h");
    feat->add_option("--features", kind_name, "statistical or segment");
    feat->add_option("--strategy",
                     [&cfg](const std::vector<std::string>& v) {
                         cfg.fusion.strategy = fusion_strategy_from_string(v.front());
                         return true;
                     },
                     "Fusion strategy (g3, a3, gmean, ..., g3a3)");
    feat->add_option("--out", out_path, "Output CSV file (default stdout)");
    add_preprocess_flags(*feat, cfg.preprocess);
    add_segmentation_flags(*feat, cfg.segmentation);

    // train
    std::string model_name = "rnn-lstm", model_path = "model.xml";
    int hidden = 128, epochs = 100;
    auto* train_cmd = app.add_subcommand("train", "Fit a model on one session");
    train_cmd->add_option("--in", in_dir, "Session directory")->required();
    train_cmd->add_option("--scheme", scheme_name, "Data scheme");
    train_cmd->add_option("--model", model_name,
                          "fnn-sigmoid, fnn-tanh, rnn-lstm, rnn-lstm-peephole");
    train_cmd->add_option("--hidden", hidden, "Hidden units");
    train_cmd->add_option("--epochs", epochs, "Training epochs");
    train_cmd->add_option("--out", model_path, "Model XML output path");
    add_preprocess_flags(*train_cmd, cfg.preprocess);
    add_segmentation_flags(*train_cmd, cfg.segmentation);

    // evaluate
    std::vector<std::string> train_dirs, eval_dirs;
    auto* eval_cmd = app.add_subcommand("evaluate", "Cross-validate or transfer-evaluate");
    eval_cmd->add_option("--in", train_dirs, "Training session directories")->required();
    eval_cmd->add_option("--eval", eval_dirs,
                         "Held-out session directories (enables transfer mode)");
    eval_cmd->add_option("--scheme", scheme_name, "Data scheme");
    eval_cmd->add_option("--model", model_name, "Model architecture");
    eval_cmd->add_option("--hidden", hidden, "Hidden units");
    eval_cmd->add_option("--k", cfg.k, "Cross-validation folds");
    eval_cmd->add_option("--epochs", cfg.epochs, "Training epochs per fold");
    eval_cmd->add_option("--transfer-epochs", cfg.transfer_epochs,
                         "Training epochs in transfer mode");
    eval_cmd->add_option("--out", out_path, "Output JSON file (default stdout)");
    add_preprocess_flags(*eval_cmd, cfg.preprocess);
    add_segmentation_flags(*eval_cmd, cfg.segmentation);

    // infer
    std::string strategy_flag = "g3a3";
    auto* infer = app.add_subcommand("infer", "Heuristic segmentation + prediction");
    infer->add_option("--model", model_path, "Model XML path")->required();
    infer->add_option("--in", in_dir, "Session directory")->required();
    infer->add_option("--scheme", scheme_name, "Data scheme (segmentation is heuristic)");
    infer->add_option("--strategy", strategy_flag, "Fusion strategy for sequence models");
    infer->add_option("--interval-ms", cfg.fusion.interval_ms, "Resampling interval, ms");
    infer->add_option("--out", out_path, "Output JSON-lines file (default stdout)");
    add_preprocess_flags(*infer, cfg.preprocess);
    add_segmentation_flags(*infer, cfg.segmentation);

    // benchmark-fusion
    std::string bf_in;
    int bf_hidden = 9;
    auto* bf = app.add_subcommand("benchmark-fusion",
                                  "Train-set memorization score per fusion strategy");
    bf->add_option("--in", bf_in, "4-label session directory (default: built-in toy set)");
    bf->add_option("--scheme", scheme_name, "Data scheme");
    bf->add_option("--hidden", bf_hidden, "LSTM hidden units");
    bf->add_option("--epochs", cfg.epochs, "Training epochs");
    bf->add_option("--out", out_path, "Output CSV file (default stdout)");
    add_preprocess_flags(*bf, cfg.preprocess);
    add_segmentation_flags(*bf, cfg.segmentation);

    // benchmark-models
    int bm_hidden = 16;
    auto* bm = app.add_subcommand("benchmark-models",
                                  "Cross-validated score per model configuration");
    bm->add_option("--in", in_dir, "Session directory (default: built-in synthetic workload)");
    bm->add_option("--scheme", scheme_name, "Data scheme");
    bm->add_option("--hidden", bm_hidden, "Hidden units");
    bm->add_option("--k", cfg.k, "Cross-validation folds");
    bm->add_option("--epochs", cfg.epochs, "Training epochs per fold");
    bm->add_option("--out", out_path, "Output CSV file (default stdout)");
    add_preprocess_flags(*bm, cfg.preprocess);
    add_segmentation_flags(*bm, cfg.segmentation);

    // replay
    std::string host = "127.0.0.1";
    std::size_t batch_size = 64;
    auto* replay = app.add_subcommand("replay", "Stream a stored session to a server");
    replay->add_option("--in", in_dir, "Session directory")->required();
    replay->add_option("--host", host, "Server address");
    replay->add_option("--tcp-port", tcp_port, "Server TCP port")->required();
    replay->add_option("--http-port", http_port, "Server HTTP port")->required();
    replay->add_option("--batch-size", batch_size, "Events per sensor batch");

    CLI11_PARSE(app, argc, argv);

    try {
        cfg.preprocess.validate();
        synth_cfg.seed = cfg.seed;
        if (serve->parsed()) return cmd_serve(serve_out, tcp_port, http_port);
        if (synth->parsed())
            return cmd_synth(synth_cfg, synth_noiseless, pair_family, synth_out);
        if (pre->parsed()) return cmd_preprocess(in_dir, out_dir, cfg.preprocess,
                                                 calibration_only);
        if (seg->parsed())
            return cmd_segment(in_dir, scheme_name, cfg.preprocess, cfg.segmentation,
                               cfg.fusion, out_path);
        if (feat->parsed())
            return cmd_features(in_dir, scheme_name, kind_name, cfg, out_path);
        if (train_cmd->parsed())
            return cmd_train(in_dir, scheme_name, model_name, hidden, epochs, cfg,
                             model_path);
        if (eval_cmd->parsed())
            return cmd_evaluate(train_dirs, eval_dirs, scheme_name, model_name, hidden,
                                cfg, out_path);
        if (infer->parsed())
            return cmd_infer(model_path, in_dir, scheme_name, strategy_flag,
                             cfg.preprocess, cfg.segmentation, cfg.fusion.interval_ms,
                             out_path);
        if (bf->parsed())
            return cmd_benchmark_fusion(bf_in, scheme_name, bf_hidden, cfg, out_path);
        if (bm->parsed())
            return cmd_benchmark_models(in_dir, scheme_name, bm_hidden, cfg, out_path);
        if (replay->parsed())
            return cmd_replay(in_dir, host, tcp_port, http_port, batch_size);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
