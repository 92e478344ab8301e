#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wristlog/features.hpp"
#include "wristlog/types.hpp"

namespace wristlog {

using Vector = std::vector<double>;

/// Dense row-major matrix; all network weights and optimizer state use it.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

// Activations (and derivatives expressed in terms of the activation value).
double sigmoid(double x);
double sigmoid_derivative(double activated);
double tanh_activation(double x);
double tanh_derivative(double activated);
double relu(double x);
double relu_derivative(double x);
/// Computed with max-subtraction; outputs sum to 1.
Vector softmax(const Vector& v);

enum class Architecture { FnnSigmoid, FnnTanh, RnnLstm, RnnLstmPeephole };

Architecture architecture_from_string(const std::string& name);
const char* to_string(Architecture arch);

/// Single-hidden-layer network, bias-free throughout.
///
/// Feedforward: input -> W_hidden -> sigmoid|tanh -> W_out -> softmax.
/// Recurrent: per frame, the four LSTM gate pre-activations come from one
/// stacked matrix over [x_t ; y_{t-1}] (row blocks i, f, o, z); the peephole
/// variant adds cell-state terms to i, f (previous state) and o (current).
/// Frame outputs go through W_out -> softmax.
struct NetworkModel {
    Architecture arch = Architecture::FnnSigmoid;
    int input_dim = 0;
    int hidden_dim = 0;
    int output_dim = 0;

    /// FNN: {W_hidden, W_out}. LSTM: {W_gates, W_out}.
    /// Peephole LSTM: {W_gates, W_out, Wc_i, Wc_f, Wc_o}.
    std::vector<Matrix> weights;

    LabelCodebook codebook;
    FeatureKind feature_kind = FeatureKind::Statistical;
    int frame_dim = 0;  // channels per frame for sequence input; 0 for FNN rows
    ColumnNormalizer normalizer;
    bool has_normalizer = false;

    bool recurrent() const {
        return arch == Architecture::RnnLstm || arch == Architecture::RnnLstmPeephole;
    }
    std::vector<std::string> weight_names() const;
    std::string topology_string() const;  // e.g. "fnn-sigmoid:48-128-12"
};

NetworkModel make_model(Architecture arch, int input_dim, int hidden_dim, int output_dim);
NetworkModel model_from_topology(const std::string& topology);

/// Uniform [-0.1, 0.1] from the seeded generator, matrix by matrix in
/// weight_names() order.
void init_weights(NetworkModel& model, std::uint64_t seed);

/// Layer-by-layer feedforward pass ending in a softmax distribution.
Vector forward_fnn(const NetworkModel& model, const Vector& input);

/// LSTM cell state and output, zeroed at the start of every sequence.
struct LstmState {
    Vector c;
    Vector y;

    static LstmState zeros(int hidden_dim) {
        return {Vector(static_cast<std::size_t>(hidden_dim), 0.0),
                Vector(static_cast<std::size_t>(hidden_dim), 0.0)};
    }
};

/// One recurrence step; works for both the plain and peephole variants
/// depending on model.arch. Returns the new state (y is the cell output).
LstmState lstm_step(const NetworkModel& model, const LstmState& state, const Vector& x);

double loss_mse(const Vector& predicted, const Vector& target);

/// The per-example training loss backward() differentiates: MSE of the
/// softmax output for FNNs, mean over frames of the per-frame MSE for
/// recurrent models (unrolled over the whole segment).
double example_loss(const NetworkModel& model, const Vector& input, const Vector& target);

/// Analytic gradients of example_loss with respect to every weight, aligned
/// with model.weights. Recurrent models backpropagate through time.
std::vector<Matrix> backward(const NetworkModel& model, const Vector& input,
                             const Vector& target);

/// Rprop- state: per-weight step sizes and previous gradient signs.
struct RpropState {
    double eta_plus = 1.2;
    double eta_minus = 0.5;
    double delta_zero = 0.1;
    double delta_max = 50.0;
    double delta_min = 1e-6;
    std::vector<Matrix> step;
    std::vector<Matrix> prev_sign;

    static RpropState for_model(const NetworkModel& model);
};

/// Sign-based update without weight backtracking: same sign grows the step,
/// a flip shrinks it and resets the sign memory; zero gradient leaves the
/// weight untouched.
void rprop_update(NetworkModel& model, RpropState& state, const std::vector<Matrix>& gradients);

struct TrainOptions {
    int epochs = 100;
    std::uint64_t seed = 0x5EED;
};

struct TrainResult {
    std::vector<double> epoch_loss;  // mean per-example loss per epoch
};

/// Seeded init, then one Rprop update per epoch from the summed per-example
/// gradients. Aborts on non-finite loss. Deterministic for a fixed seed.
TrainResult train(NetworkModel& model, const std::vector<Vector>& rows,
                  const std::vector<Vector>& targets, const TrainOptions& options);

struct Prediction {
    std::string label;
    Vector distribution;
};

/// FNN: the softmax output. Recurrent: per-frame outputs summed over the
/// sequence and renormalized. The row must already be normalized if the
/// model was trained on normalized features.
Prediction predict(const NetworkModel& model, const Vector& row);

/// Apply the model's stored column normalizer when present, then predict.
Prediction predict_raw(const NetworkModel& model, const Vector& raw_row);

}  // namespace wristlog
