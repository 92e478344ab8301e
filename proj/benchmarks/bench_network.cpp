#include <benchmark/benchmark.h>

#include "wristlog/network.hpp"
#include "wristlog/rng.hpp"

using namespace wristlog;

namespace {

Vector random_vector(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Vector v(n);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

void BM_ForwardFnn(benchmark::State& state) {
    NetworkModel model = make_model(Architecture::FnnSigmoid, 48, static_cast<int>(state.range(0)), 12);
    init_weights(model, 1);
    const Vector x = random_vector(48, 2);
    for (auto _ : state) benchmark::DoNotOptimize(forward_fnn(model, x));
}
BENCHMARK(BM_ForwardFnn)->Arg(32)->Arg(128);

void BM_LstmSequenceForward(benchmark::State& state) {
    NetworkModel model = make_model(Architecture::RnnLstm, 6, static_cast<int>(state.range(0)), 12);
    init_weights(model, 3);
    model.frame_dim = 6;
    const Vector x = random_vector(6 * 50, 4);  // a 100 ms window at 2 ms frames
    for (auto _ : state) benchmark::DoNotOptimize(predict(model, x));
}
BENCHMARK(BM_LstmSequenceForward)->Arg(16)->Arg(32);

void BM_BackwardLstm(benchmark::State& state) {
    NetworkModel model = make_model(Architecture::RnnLstm, 6, static_cast<int>(state.range(0)), 12);
    init_weights(model, 5);
    model.frame_dim = 6;
    const Vector x = random_vector(6 * 50, 6);
    Vector target(12, 0.0);
    target[3] = 1.0;
    for (auto _ : state) benchmark::DoNotOptimize(backward(model, x, target));
}
BENCHMARK(BM_BackwardLstm)->Arg(16)->Arg(32);

void BM_TrainXorEpochs(benchmark::State& state) {
    const std::vector<Vector> rows{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const std::vector<Vector> targets{{1, 0}, {0, 1}, {0, 1}, {1, 0}};
    TrainOptions options;
    options.epochs = static_cast<int>(state.range(0));
    for (auto _ : state) {
        NetworkModel model = make_model(Architecture::FnnSigmoid, 2, 8, 2);
        benchmark::DoNotOptimize(train(model, rows, targets, options));
    }
}
BENCHMARK(BM_TrainXorEpochs)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
