#include <doctest.h>

#include <cmath>
#include <vector>

#include "wristlog/network.hpp"
#include "wristlog/rng.hpp"

using namespace wristlog;

namespace {

// Central finite difference of example_loss with respect to one weight.
double fd_gradient(NetworkModel model, const Vector& x, const Vector& t, std::size_t w,
                   std::size_t i, double eps) {
    const double saved = model.weights[w].data[i];
    model.weights[w].data[i] = saved + eps;
    const double up = example_loss(model, x, t);
    model.weights[w].data[i] = saved - eps;
    const double down = example_loss(model, x, t);
    return (up - down) / (2.0 * eps);
}

double worst_gradient_deviation(Architecture arch, int input_dim, int hidden, int output_dim,
                                const Vector& x, const Vector& t, std::uint64_t seed) {
    NetworkModel model = make_model(arch, input_dim, hidden, output_dim);
    init_weights(model, seed);
    const auto grads = backward(model, x, t);
    double worst = 0.0;
    for (std::size_t w = 0; w < grads.size(); ++w) {
        for (std::size_t i = 0; i < grads[w].data.size(); ++i) {
            const double analytic = grads[w].data[i];
            const double numeric = fd_gradient(model, x, t, w, i, 1e-5);
            // The absolute floor keeps finite-difference noise on near-zero
            // gradients from registering as a relative error.
            const double rel = std::abs(analytic - numeric) /
                               std::max({1e-6, std::abs(analytic), std::abs(numeric)});
            worst = std::max(worst, rel);
        }
    }
    return worst;
}

}  // namespace

TEST_CASE("activation functions and their derivatives") {
    CHECK(sigmoid(0.0) == doctest::Approx(0.5));
    CHECK(sigmoid_derivative(0.5) == doctest::Approx(0.25));
    CHECK(tanh_activation(0.0) == 0.0);
    CHECK(tanh_derivative(std::tanh(1.0)) == doctest::Approx(1.0 - std::tanh(1.0) * std::tanh(1.0)));
    CHECK(relu(-2.0) == 0.0);
    CHECK(relu(2.0) == 2.0);
}

TEST_CASE("softmax is a shifted-exponential distribution") {
    const Vector out = softmax({1000.0, 1000.0, 1000.0});  // survives large inputs
    for (double v : out) CHECK(v == doctest::Approx(1.0 / 3.0));
    const Vector skew = softmax({0.0, 1.0});
    CHECK(skew[0] + skew[1] == doctest::Approx(1.0));
    CHECK(skew[1] > skew[0]);
}

TEST_CASE("analytic gradients match finite differences") {
    Rng rng(99);
    SUBCASE("feedforward") {
        Vector x(6), t{1.0, 0.0, 0.0};
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        CHECK(worst_gradient_deviation(Architecture::FnnSigmoid, 6, 8, 3, x, t, 1) < 1e-4);
        CHECK(worst_gradient_deviation(Architecture::FnnTanh, 6, 8, 3, x, t, 2) < 1e-4);
    }
    SUBCASE("recurrent") {
        const int frame_dim = 3, frames = 5;
        Vector x(frame_dim * frames), t{0.0, 1.0};
        for (double& v : x) v = rng.uniform(-1.0, 1.0);
        CHECK(worst_gradient_deviation(Architecture::RnnLstm, frame_dim, 4, 2, x, t, 3) < 1e-4);
        CHECK(worst_gradient_deviation(Architecture::RnnLstmPeephole, frame_dim, 4, 2, x, t, 4) <
              1e-4);
    }
}

TEST_CASE("Rprop update grows and shrinks step sizes by gradient sign") {
    NetworkModel model = make_model(Architecture::FnnSigmoid, 1, 1, 1);
    model.weights[0].data[0] = 0.0;
    model.weights[1].data[0] = 0.0;
    RpropState state = RpropState::for_model(model);

    std::vector<Matrix> grads{Matrix(1, 1), Matrix(1, 1)};
    grads[0].data[0] = 1.0;
    rprop_update(model, state, grads);
    CHECK(model.weights[0].data[0] == doctest::Approx(-0.1));  // moved against the gradient

    rprop_update(model, state, grads);  // same sign: step grows by eta+
    CHECK(model.weights[0].data[0] == doctest::Approx(-0.1 - 0.12));

    grads[0].data[0] = -1.0;  // sign flip: step shrinks by eta-
    rprop_update(model, state, grads);
    CHECK(state.step[0].data[0] == doctest::Approx(0.12 * 0.5));

    grads[0].data[0] = 0.0;  // zero gradient leaves the weight alone
    const double before = model.weights[0].data[0];
    rprop_update(model, state, grads);
    CHECK(model.weights[0].data[0] == before);
}

TEST_CASE("training solves XOR") {
    const std::vector<Vector> rows{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const std::vector<Vector> targets{{1, 0}, {0, 1}, {0, 1}, {1, 0}};
    NetworkModel model = make_model(Architecture::FnnSigmoid, 2, 8, 2);
    TrainOptions options;
    options.epochs = 500;
    options.seed = 7;
    const TrainResult result = train(model, rows, targets, options);

    double mse = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) mse += example_loss(model, rows[i], targets[i]);
    mse /= static_cast<double>(rows.size());
    CHECK(mse < 0.01);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Prediction p = predict(model, rows[i]);
        CHECK(p.distribution[targets[i][1] > 0.5 ? 1 : 0] > 0.5);
    }
    CHECK(result.epoch_loss.size() <= 500);
}

TEST_CASE("training is deterministic under a fixed seed") {
    const std::vector<Vector> rows{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    const std::vector<Vector> targets{{1, 0}, {0, 1}, {0, 1}, {1, 0}};
    TrainOptions options;
    options.epochs = 60;
    NetworkModel a = make_model(Architecture::FnnSigmoid, 2, 8, 2);
    NetworkModel b = make_model(Architecture::FnnSigmoid, 2, 8, 2);
    train(a, rows, targets, options);
    train(b, rows, targets, options);
    for (std::size_t w = 0; w < a.weights.size(); ++w)
        CHECK(a.weights[w].data == b.weights[w].data);
}

TEST_CASE("recurrent prediction pools per-frame outputs") {
    NetworkModel model = make_model(Architecture::RnnLstm, 2, 4, 3);
    init_weights(model, 5);
    model.frame_dim = 2;
    model.codebook = LabelCodebook({"a", "b", "c"});
    const Vector sequence{0.1, -0.2, 0.3, 0.4, -0.5, 0.6};  // 3 frames of 2 channels
    const Prediction p = predict(model, sequence);
    REQUIRE(p.distribution.size() == 3);
    double sum = 0.0;
    for (double v : p.distribution) sum += v;
    CHECK(sum == doctest::Approx(1.0));
    CHECK(model.codebook.contains(p.label));
}

TEST_CASE("topology strings round-trip") {
    NetworkModel model = make_model(Architecture::RnnLstmPeephole, 6, 16, 12);
    const NetworkModel back = model_from_topology(model.topology_string());
    CHECK(back.arch == model.arch);
    CHECK(back.input_dim == 6);
    CHECK(back.hidden_dim == 16);
    CHECK(back.output_dim == 12);
}
