#include <benchmark/benchmark.h>

#include "wristlog/evaluation.hpp"
#include "wristlog/fusion.hpp"
#include "wristlog/preprocess.hpp"
#include "wristlog/rng.hpp"
#include "wristlog/segmentation.hpp"
#include "wristlog/synthgen.hpp"

using namespace wristlog;

namespace {

RecordingSession small_session() {
    SynthConfig cfg;
    cfg.alphabet = LabelCodebook({"1", "2", "3", "4"});
    cfg.instances_per_key = 10;
    return generate_session(cfg);
}

void BM_MedianFilter(benchmark::State& state) {
    Rng rng(1);
    std::vector<double> in(static_cast<std::size_t>(state.range(0)));
    for (double& v : in) v = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(median_filter(in, 9));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MedianFilter)->Arg(1 << 12)->Arg(1 << 15);

void BM_Butterworth(benchmark::State& state) {
    Rng rng(2);
    std::vector<double> in(static_cast<std::size_t>(state.range(0)));
    for (double& v : in) v = rng.normal();
    for (auto _ : state)
        benchmark::DoNotOptimize(butterworth(in, FilterKind::LowPass, 8.0, 100.0, 2));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Butterworth)->Arg(1 << 12)->Arg(1 << 15);

void BM_KalmanSmooth(benchmark::State& state) {
    Rng rng(3);
    std::vector<double> in(static_cast<std::size_t>(state.range(0)));
    for (double& v : in) v = rng.normal();
    for (auto _ : state) benchmark::DoNotOptimize(kalman_smooth(in, 1e-3, 1e-1));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_KalmanSmooth)->Arg(1 << 12)->Arg(1 << 15);

void BM_PreprocessPipeline(benchmark::State& state) {
    const RecordingSession session = small_session();
    const PreprocessConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(preprocess_pipeline(session, cfg));
}
BENCHMARK(BM_PreprocessPipeline);

void BM_FuseSession(benchmark::State& state) {
    const RecordingSession session = small_session();
    const FusionConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(fuse_session(session, cfg));
}
BENCHMARK(BM_FuseSession);

void BM_SegmentByPeaks(benchmark::State& state) {
    const RecordingSession session = small_session();
    const FusionConfig fusion;
    const FusedFrameSequence frames = fuse_session(session, fusion);
    const TriaxialSeries gyro = resample_constant_rate(
        preprocess_pipeline(session, PreprocessConfig{}, PipelineMode::CalibrationOnly).gyroscope,
        fusion.interval_ms);
    for (auto _ : state) benchmark::DoNotOptimize(segment_by_peaks(frames, gyro, 25, 0.4));
}
BENCHMARK(BM_SegmentByPeaks);

}  // namespace

BENCHMARK_MAIN();
