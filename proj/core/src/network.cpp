#include "wristlog/network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wristlog/rng.hpp"

namespace wristlog {

namespace {

Vector matvec(const Matrix& m, const Vector& v) {
    if (v.size() != m.cols) throw std::invalid_argument("matvec: dimension mismatch");
    Vector out(m.rows, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.data.data() + r * m.cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
    return out;
}

/// out += m^T * v
void add_matvec_transposed(const Matrix& m, const Vector& v, Vector& out) {
    for (std::size_t r = 0; r < m.rows; ++r) {
        const double* row = m.data.data() + r * m.cols;
        const double vr = v[r];
        if (vr == 0.0) continue;
        for (std::size_t c = 0; c < m.cols; ++c) out[c] += row[c] * vr;
    }
}

/// grad += outer(e, y)
void add_outer(Matrix& grad, const Vector& e, const Vector& y) {
    for (std::size_t r = 0; r < grad.rows; ++r) {
        double* row = grad.data.data() + r * grad.cols;
        const double er = e[r];
        if (er == 0.0) continue;
        for (std::size_t c = 0; c < grad.cols; ++c) row[c] += er * y[c];
    }
}

Vector concat(const Vector& a, const Vector& b) {
    Vector out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

/// dE/ds for a softmax output s -> y with upstream dE/dy (full Jacobian).
Vector softmax_backward(const Vector& y, const Vector& dy) {
    double dot = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) dot += dy[i] * y[i];
    Vector ds(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) ds[k] = y[k] * (dy[k] - dot);
    return ds;
}

/// dE/dy for the MSE loss (1/n) sum (T_i - y_i)^2.
Vector mse_backward(const Vector& y, const Vector& target, double scale) {
    Vector dy(y.size());
    const double f = scale * 2.0 / static_cast<double>(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) dy[i] = f * (y[i] - target[i]);
    return dy;
}

double hidden_activation(const NetworkModel& model, double x) {
    return model.arch == Architecture::FnnSigmoid ? sigmoid(x) : tanh_activation(x);
}

double hidden_derivative(const NetworkModel& model, double activated) {
    return model.arch == Architecture::FnnSigmoid ? sigmoid_derivative(activated)
                                                  : tanh_derivative(activated);
}

struct LstmStepCache {
    Vector u;  // [x ; y_prev]
    Vector i, f, o, z;
    Vector c_prev, c, tanh_c, y;
    Vector output;  // softmax(W_out y)
};

/// Forward one step, recording everything the backward pass needs.
LstmStepCache lstm_step_cached(const NetworkModel& model, const LstmState& state,
                               const Vector& x) {
    const std::size_t h = static_cast<std::size_t>(model.hidden_dim);
    const Matrix& gates = model.weights[0];

    LstmStepCache cache;
    cache.u = concat(x, state.y);
    cache.c_prev = state.c;

    Vector pre = matvec(gates, cache.u);  // blocks: i, f, o, z
    if (model.arch == Architecture::RnnLstmPeephole) {
        Vector ci = matvec(model.weights[2], state.c);
        Vector cf = matvec(model.weights[3], state.c);
        for (std::size_t k = 0; k < h; ++k) {
            pre[k] += ci[k];
            pre[h + k] += cf[k];
        }
    }

    cache.i.resize(h);
    cache.f.resize(h);
    cache.z.resize(h);
    for (std::size_t k = 0; k < h; ++k) {
        cache.i[k] = sigmoid(pre[k]);
        cache.f[k] = sigmoid(pre[h + k]);
        cache.z[k] = tanh_activation(pre[3 * h + k]);
    }

    cache.c.resize(h);
    for (std::size_t k = 0; k < h; ++k)
        cache.c[k] = cache.f[k] * cache.c_prev[k] + cache.i[k] * cache.z[k];

    if (model.arch == Architecture::RnnLstmPeephole) {
        Vector co = matvec(model.weights[4], cache.c);
        for (std::size_t k = 0; k < h; ++k) pre[2 * h + k] += co[k];
    }
    cache.o.resize(h);
    cache.tanh_c.resize(h);
    cache.y.resize(h);
    for (std::size_t k = 0; k < h; ++k) {
        cache.o[k] = sigmoid(pre[2 * h + k]);
        cache.tanh_c[k] = tanh_activation(cache.c[k]);
        cache.y[k] = cache.o[k] * cache.tanh_c[k];
    }
    return cache;
}

std::vector<Vector> split_frames(const NetworkModel& model, const Vector& row) {
    if (model.frame_dim <= 0) throw std::invalid_argument("recurrent model needs frame_dim > 0");
    const std::size_t dim = static_cast<std::size_t>(model.frame_dim);
    if (row.size() % dim != 0)
        throw std::invalid_argument("row length is not a multiple of frame dimension");
    std::vector<Vector> frames(row.size() / dim);
    for (std::size_t t = 0; t < frames.size(); ++t)
        frames[t].assign(row.begin() + static_cast<std::ptrdiff_t>(t * dim),
                         row.begin() + static_cast<std::ptrdiff_t>((t + 1) * dim));
    return frames;
}

std::vector<LstmStepCache> lstm_forward_sequence(const NetworkModel& model, const Vector& row) {
    auto frames = split_frames(model, row);
    LstmState state = LstmState::zeros(model.hidden_dim);
    std::vector<LstmStepCache> steps;
    steps.reserve(frames.size());
    for (const auto& x : frames) {
        LstmStepCache cache = lstm_step_cached(model, state, x);
        cache.output = softmax(matvec(model.weights[1], cache.y));
        state.c = cache.c;
        state.y = cache.y;
        steps.push_back(std::move(cache));
    }
    return steps;
}

std::vector<Matrix> zero_gradients(const NetworkModel& model) {
    std::vector<Matrix> grads;
    grads.reserve(model.weights.size());
    for (const auto& w : model.weights) grads.emplace_back(w.rows, w.cols);
    return grads;
}

std::vector<Matrix> backward_fnn(const NetworkModel& model, const Vector& input,
                                 const Vector& target) {
    Vector pre_hidden = matvec(model.weights[0], input);
    Vector hidden(pre_hidden.size());
    for (std::size_t k = 0; k < hidden.size(); ++k)
        hidden[k] = hidden_activation(model, pre_hidden[k]);
    Vector output = softmax(matvec(model.weights[1], hidden));

    Vector ds = softmax_backward(output, mse_backward(output, target, 1.0));

    auto grads = zero_gradients(model);
    add_outer(grads[1], ds, hidden);

    Vector dhidden(hidden.size(), 0.0);
    add_matvec_transposed(model.weights[1], ds, dhidden);
    for (std::size_t k = 0; k < hidden.size(); ++k)
        dhidden[k] *= hidden_derivative(model, hidden[k]);
    add_outer(grads[0], dhidden, input);
    return grads;
}

std::vector<Matrix> backward_lstm(const NetworkModel& model, const Vector& row,
                                  const Vector& target) {
    const std::size_t h = static_cast<std::size_t>(model.hidden_dim);
    const std::size_t in = static_cast<std::size_t>(model.input_dim);
    const bool peephole = model.arch == Architecture::RnnLstmPeephole;
    const auto steps = lstm_forward_sequence(model, row);
    const double frame_scale = 1.0 / static_cast<double>(steps.size());

    auto grads = zero_gradients(model);
    Vector carry_dy(h, 0.0);
    Vector carry_dc(h, 0.0);

    for (std::size_t t = steps.size(); t-- > 0;) {
        const auto& s = steps[t];

        Vector ds = softmax_backward(s.output, mse_backward(s.output, target, frame_scale));
        add_outer(grads[1], ds, s.y);

        Vector dy = carry_dy;
        add_matvec_transposed(model.weights[1], ds, dy);

        Vector dp_o(h);
        for (std::size_t k = 0; k < h; ++k)
            dp_o[k] = dy[k] * s.tanh_c[k] * sigmoid_derivative(s.o[k]);

        Vector dc = carry_dc;
        for (std::size_t k = 0; k < h; ++k)
            dc[k] += dy[k] * s.o[k] * tanh_derivative(s.tanh_c[k]);
        if (peephole) add_matvec_transposed(model.weights[4], dp_o, dc);

        Vector dp_i(h), dp_f(h), dp_z(h);
        for (std::size_t k = 0; k < h; ++k) {
            dp_i[k] = dc[k] * s.z[k] * sigmoid_derivative(s.i[k]);
            dp_f[k] = dc[k] * s.c_prev[k] * sigmoid_derivative(s.f[k]);
            dp_z[k] = dc[k] * s.i[k] * tanh_derivative(s.z[k]);
        }

        Vector dp = concat(concat(dp_i, dp_f), concat(dp_o, dp_z));
        add_outer(grads[0], dp, s.u);
        if (peephole) {
            add_outer(grads[2], dp_i, s.c_prev);
            add_outer(grads[3], dp_f, s.c_prev);
            add_outer(grads[4], dp_o, s.c);
        }

        Vector du(in + h, 0.0);
        add_matvec_transposed(model.weights[0], dp, du);
        std::copy(du.begin() + static_cast<std::ptrdiff_t>(in), du.end(), carry_dy.begin());

        for (std::size_t k = 0; k < h; ++k) carry_dc[k] = dc[k] * s.f[k];
        if (peephole) {
            add_matvec_transposed(model.weights[2], dp_i, carry_dc);
            add_matvec_transposed(model.weights[3], dp_f, carry_dc);
        }
    }
    return grads;
}

}  // namespace

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
double sigmoid_derivative(double activated) { return activated * (1.0 - activated); }
double tanh_activation(double x) { return std::tanh(x); }
double tanh_derivative(double activated) { return 1.0 - activated * activated; }
double relu(double x) { return x > 0.0 ? x : 0.0; }
double relu_derivative(double x) { return x > 0.0 ? 1.0 : 0.0; }

Vector softmax(const Vector& v) {
    if (v.empty()) throw std::invalid_argument("softmax: empty input");
    const double m = *std::max_element(v.begin(), v.end());
    Vector out(v.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = std::exp(v[i] - m);
        sum += out[i];
    }
    for (double& o : out) o /= sum;
    return out;
}

Architecture architecture_from_string(const std::string& name) {
    if (name == "fnn-sigmoid") return Architecture::FnnSigmoid;
    if (name == "fnn-tanh") return Architecture::FnnTanh;
    if (name == "rnn-lstm") return Architecture::RnnLstm;
    if (name == "rnn-lstm-peephole") return Architecture::RnnLstmPeephole;
    throw std::invalid_argument("unknown architecture: " + name);
}

const char* to_string(Architecture arch) {
    switch (arch) {
        case Architecture::FnnSigmoid: return "fnn-sigmoid";
        case Architecture::FnnTanh: return "fnn-tanh";
        case Architecture::RnnLstm: return "rnn-lstm";
        case Architecture::RnnLstmPeephole: return "rnn-lstm-peephole";
    }
    return "?";
}

std::vector<std::string> NetworkModel::weight_names() const {
    if (!recurrent()) return {"W_hidden", "W_out"};
    if (arch == Architecture::RnnLstm) return {"W_gates", "W_out"};
    return {"W_gates", "W_out", "Wc_i", "Wc_f", "Wc_o"};
}

std::string NetworkModel::topology_string() const {
    return std::string(to_string(arch)) + ":" + std::to_string(input_dim) + "-" +
           std::to_string(hidden_dim) + "-" + std::to_string(output_dim);
}

NetworkModel make_model(Architecture arch, int input_dim, int hidden_dim, int output_dim) {
    if (input_dim < 1 || hidden_dim < 1 || output_dim < 1)
        throw std::invalid_argument("layer sizes must be >= 1");
    NetworkModel m;
    m.arch = arch;
    m.input_dim = input_dim;
    m.hidden_dim = hidden_dim;
    m.output_dim = output_dim;
    const std::size_t in = static_cast<std::size_t>(input_dim);
    const std::size_t h = static_cast<std::size_t>(hidden_dim);
    const std::size_t out = static_cast<std::size_t>(output_dim);
    if (arch == Architecture::FnnSigmoid || arch == Architecture::FnnTanh) {
        m.weights = {Matrix(h, in), Matrix(out, h)};
    } else {
        m.weights = {Matrix(4 * h, in + h), Matrix(out, h)};
        if (arch == Architecture::RnnLstmPeephole) {
            m.weights.emplace_back(h, h);
            m.weights.emplace_back(h, h);
            m.weights.emplace_back(h, h);
        }
        m.frame_dim = input_dim;
    }
    return m;
}

NetworkModel model_from_topology(const std::string& topology) {
    auto colon = topology.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("topology must look like fnn-sigmoid:48-128-12");
    Architecture arch = architecture_from_string(topology.substr(0, colon));
    std::string dims = topology.substr(colon + 1);
    int parsed[3];
    std::size_t pos = 0;
    for (int i = 0; i < 3; ++i) {
        std::size_t used = 0;
        parsed[i] = std::stoi(dims.substr(pos), &used);
        pos += used;
        if (i < 2) {
            if (pos >= dims.size() || dims[pos] != '-')
                throw std::invalid_argument("bad topology string: " + topology);
            ++pos;
        }
    }
    if (pos != dims.size()) throw std::invalid_argument("bad topology string: " + topology);
    return make_model(arch, parsed[0], parsed[1], parsed[2]);
}

void init_weights(NetworkModel& model, std::uint64_t seed) {
    Rng rng(seed);
    for (auto& w : model.weights)
        for (double& v : w.data) v = rng.uniform(-0.1, 0.1);
}

Vector forward_fnn(const NetworkModel& model, const Vector& input) {
    if (model.recurrent()) throw std::invalid_argument("forward_fnn on a recurrent model");
    Vector hidden = matvec(model.weights[0], input);
    for (double& v : hidden) v = hidden_activation(model, v);
    return softmax(matvec(model.weights[1], hidden));
}

LstmState lstm_step(const NetworkModel& model, const LstmState& state, const Vector& x) {
    if (!model.recurrent()) throw std::invalid_argument("lstm_step on a feedforward model");
    auto cache = lstm_step_cached(model, state, x);
    return {cache.c, cache.y};
}

double loss_mse(const Vector& predicted, const Vector& target) {
    if (predicted.size() != target.size()) throw std::invalid_argument("loss_mse: size mismatch");
    if (predicted.empty()) throw std::invalid_argument("loss_mse: empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = target[i] - predicted[i];
        acc += d * d;
    }
    return acc / static_cast<double>(predicted.size());
}

double example_loss(const NetworkModel& model, const Vector& input, const Vector& target) {
    if (!model.recurrent()) return loss_mse(forward_fnn(model, input), target);
    const auto steps = lstm_forward_sequence(model, input);
    double acc = 0.0;
    for (const auto& s : steps) acc += loss_mse(s.output, target);
    return acc / static_cast<double>(steps.size());
}

std::vector<Matrix> backward(const NetworkModel& model, const Vector& input,
                             const Vector& target) {
    return model.recurrent() ? backward_lstm(model, input, target)
                             : backward_fnn(model, input, target);
}

RpropState RpropState::for_model(const NetworkModel& model) {
    RpropState s;
    for (const auto& w : model.weights) {
        Matrix step(w.rows, w.cols);
        std::fill(step.data.begin(), step.data.end(), s.delta_zero);
        s.step.push_back(std::move(step));
        s.prev_sign.emplace_back(w.rows, w.cols);
    }
    return s;
}

void rprop_update(NetworkModel& model, RpropState& state, const std::vector<Matrix>& gradients) {
    if (gradients.size() != model.weights.size())
        throw std::invalid_argument("rprop_update: gradient shape mismatch");
    for (std::size_t m = 0; m < model.weights.size(); ++m) {
        auto& w = model.weights[m].data;
        auto& step = state.step[m].data;
        auto& prev = state.prev_sign[m].data;
        const auto& g = gradients[m].data;
        for (std::size_t k = 0; k < w.size(); ++k) {
            const double sign = g[k] > 0.0 ? 1.0 : (g[k] < 0.0 ? -1.0 : 0.0);
            const double product = prev[k] * sign;
            if (product > 0.0) {
                step[k] = std::min(step[k] * state.eta_plus, state.delta_max);
                prev[k] = sign;
            } else if (product < 0.0) {
                step[k] = std::max(step[k] * state.eta_minus, state.delta_min);
                prev[k] = 0.0;  // sign memory reset; no weight backtracking
            } else {
                prev[k] = sign;
            }
            w[k] -= sign * step[k];
        }
    }
}

TrainResult train(NetworkModel& model, const std::vector<Vector>& rows,
                  const std::vector<Vector>& targets, const TrainOptions& options) {
    if (rows.size() != targets.size()) throw std::invalid_argument("train: rows/targets mismatch");
    if (rows.empty()) throw std::invalid_argument("train: empty dataset");

    init_weights(model, options.seed);
    RpropState opt = RpropState::for_model(model);

    TrainResult result;
    result.epoch_loss.reserve(static_cast<std::size_t>(options.epochs));
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        // Full-batch gradient per epoch: Rprop's sign-based step adaptation
        // needs a stable gradient direction, which per-example updates
        // destroy (step sizes collapse and training stalls).
        auto accumulated = zero_gradients(model);
        double loss_sum = 0.0;
        for (std::size_t idx = 0; idx < rows.size(); ++idx) {
            auto grads = backward(model, rows[idx], targets[idx]);
            for (std::size_t m = 0; m < grads.size(); ++m)
                for (std::size_t k = 0; k < grads[m].data.size(); ++k)
                    accumulated[m].data[k] += grads[m].data[k];
            loss_sum += example_loss(model, rows[idx], targets[idx]);
        }
        rprop_update(model, opt, accumulated);
        const double mean_loss = loss_sum / static_cast<double>(rows.size());
        if (!std::isfinite(mean_loss))
            throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                     std::to_string(epoch));
        result.epoch_loss.push_back(mean_loss);
    }
    return result;
}

Prediction predict(const NetworkModel& model, const Vector& row) {
    Vector distribution;
    if (!model.recurrent()) {
        distribution = forward_fnn(model, row);
    } else {
        const auto steps = lstm_forward_sequence(model, row);
        distribution.assign(static_cast<std::size_t>(model.output_dim), 0.0);
        for (const auto& s : steps)
            for (std::size_t i = 0; i < distribution.size(); ++i) distribution[i] += s.output[i];
        double sum = std::accumulate(distribution.begin(), distribution.end(), 0.0);
        for (double& v : distribution) v /= sum;
    }
    auto it = std::max_element(distribution.begin(), distribution.end());
    std::size_t index = static_cast<std::size_t>(it - distribution.begin());
    std::string label =
        model.codebook.size() == distribution.size() ? model.codebook.symbol_at(index)
                                                     : std::to_string(index);
    return {std::move(label), std::move(distribution)};
}

Prediction predict_raw(const NetworkModel& model, const Vector& raw_row) {
    return predict(model, model.has_normalizer ? model.normalizer.apply(raw_row) : raw_row);
}

}  // namespace wristlog
