#pragma once

// The comparison model: the same 1D convolution front end, then max pooling,
// flatten, a single trainable dense layer and softmax. Trained with
// full-batch gradient descent on the mean squared error between the softmax
// output and one-hot targets; both the dense layer and the convolution
// kernels receive gradients (the kernels are this model's only other
// adaptive stage).

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwc/conv/frontend.hpp"
#include "bwc/rng.hpp"

namespace bwc::cnn {

struct InputTooShort : std::runtime_error {
    InputTooShort() : std::runtime_error("input shorter than the pooling window") {}
};

struct EmptyTrainSet : std::runtime_error {
    EmptyTrainSet() : std::runtime_error("training set is empty") {}
};

struct DivergedLoss : std::runtime_error {
    explicit DivergedLoss(int epoch)
        : std::runtime_error("loss became non-finite at epoch " + std::to_string(epoch)) {}
};

inline std::size_t pooled_length(std::size_t len, std::size_t size, std::size_t stride) {
    return (len - size) / stride + 1;  // trailing remainder dropped
}

inline std::vector<double> max_pool(std::span<const double> v, std::size_t size = 2,
                                    std::size_t stride = 2) {
    if (v.size() < size) throw InputTooShort();
    std::vector<double> out(pooled_length(v.size(), size, stride));
    for (std::size_t t = 0; t < out.size(); ++t) {
        double m = v[t * stride];
        for (std::size_t j = 1; j < size; ++j) m = std::max(m, v[t * stride + j]);
        out[t] = m;
    }
    return out;
}

// Numerically stable two-class softmax (max-shifted).
inline std::array<double, 2> softmax(std::array<double, 2> z) {
    const double m = std::max(z[0], z[1]);
    const double e0 = std::exp(z[0] - m);
    const double e1 = std::exp(z[1] - m);
    const double sum = e0 + e1;
    return {e0 / sum, e1 / sum};
}

struct TrainConfig {
    double learning_rate = 0.005;
    int epochs = 2000;
    std::uint64_t seed = 0;
    bool train_kernels = true;  // freezing them leaves only the dense stage
};

struct BaselineCnn {
    std::size_t input_len = 5000;
    std::size_t kernel_count = 3;
    std::size_t kernel_size = 10;
    std::size_t pool_size = 2;
    std::size_t pool_stride = 2;

    std::vector<conv::Kernel> kernels;
    std::vector<std::vector<double>> dense_w;  // [class][feature]
    std::array<double, 2> bias{0.0, 0.0};

    std::size_t conv_len() const { return input_len - kernel_size + 1; }
    std::size_t pooled_per_row() const { return pooled_length(conv_len(), pool_size, pool_stride); }
    std::size_t feature_len() const { return kernel_count * pooled_per_row(); }
};

// Kernels start uniform in (0, 1) like the hybrid model's; the dense layer
// starts uniform in +-1/sqrt(fan_in).
inline BaselineCnn init_baseline(std::size_t input_len, std::size_t kernel_count,
                                 std::size_t kernel_size, std::uint64_t seed) {
    BaselineCnn net;
    net.input_len = input_len;
    net.kernel_count = kernel_count;
    net.kernel_size = kernel_size;
    net.kernels = conv::init_kernels(static_cast<int>(kernel_count),
                                     static_cast<int>(kernel_size),
                                     derive_seed(seed, "cnn/kernels"));
    const std::size_t fan_in = net.feature_len();
    const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
    Rng rng(derive_seed(seed, "cnn/dense"));
    net.dense_w.assign(2, std::vector<double>(fan_in));
    for (auto& row : net.dense_w)
        for (auto& w : row) w = rng.uniform(-scale, scale);
    net.bias = {0.0, 0.0};
    return net;
}

namespace detail {

struct ForwardPass {
    std::vector<std::vector<double>> conv_rows;    // pre-ReLU
    std::vector<std::vector<std::size_t>> argmax;  // per row, per pooled slot
    std::vector<double> features;                  // pooled + flattened
    std::array<double, 2> probs{0.0, 0.0};
};

inline ForwardPass forward(const BaselineCnn& net, std::span<const double> x) {
    ForwardPass fp;
    fp.conv_rows.reserve(net.kernel_count);
    fp.argmax.resize(net.kernel_count);
    fp.features.reserve(net.feature_len());
    for (std::size_t m = 0; m < net.kernel_count; ++m) {
        fp.conv_rows.push_back(conv::convolve1d(x, net.kernels[m]));
        const auto& c = fp.conv_rows.back();
        const std::size_t pooled = pooled_length(c.size(), net.pool_size, net.pool_stride);
        fp.argmax[m].resize(pooled);
        for (std::size_t t = 0; t < pooled; ++t) {
            std::size_t best = t * net.pool_stride;
            for (std::size_t j = 1; j < net.pool_size; ++j) {
                const std::size_t i = t * net.pool_stride + j;
                if (std::max(0.0, c[i]) > std::max(0.0, c[best])) best = i;
            }
            fp.argmax[m][t] = best;
            fp.features.push_back(std::max(0.0, c[best]));
        }
    }
    std::array<double, 2> z = net.bias;
    for (std::size_t cls = 0; cls < 2; ++cls) {
        const auto& w = net.dense_w[cls];
        double acc = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) acc += w[i] * fp.features[i];
        z[cls] += acc;
    }
    fp.probs = softmax(z);
    return fp;
}

}  // namespace detail

struct Gradients {
    std::vector<std::vector<double>> kernels;
    std::vector<std::vector<double>> dense_w;
    std::array<double, 2> bias{0.0, 0.0};
    double loss = 0.0;
};

// Full-batch loss and analytic gradients for every trainable parameter.
inline Gradients compute_gradients(const BaselineCnn& net,
                                   const std::vector<std::vector<double>>& inputs,
                                   const std::vector<int>& classes) {
    if (inputs.empty()) throw EmptyTrainSet();
    Gradients g;
    g.kernels.assign(net.kernel_count, std::vector<double>(net.kernel_size, 0.0));
    g.dense_w.assign(2, std::vector<double>(net.feature_len(), 0.0));

    const double inv_n = 1.0 / static_cast<double>(inputs.size());
    for (std::size_t n = 0; n < inputs.size(); ++n) {
        const auto fp = detail::forward(net, inputs[n]);
        const std::array<double, 2> y{classes[n] == 0 ? 1.0 : 0.0, classes[n] == 1 ? 1.0 : 0.0};

        double sample_loss = 0.0;
        std::array<double, 2> dp{};
        for (std::size_t c = 0; c < 2; ++c) {
            const double diff = fp.probs[c] - y[c];
            sample_loss += diff * diff;
            dp[c] = 2.0 * diff * inv_n;
        }
        g.loss += sample_loss * inv_n;

        // softmax Jacobian: dz_c = p_c * (dp_c - sum_j dp_j p_j)
        const double dot = dp[0] * fp.probs[0] + dp[1] * fp.probs[1];
        std::array<double, 2> dz{fp.probs[0] * (dp[0] - dot), fp.probs[1] * (dp[1] - dot)};

        std::vector<double> dfeat(net.feature_len(), 0.0);
        for (std::size_t c = 0; c < 2; ++c) {
            g.bias[c] += dz[c];
            for (std::size_t i = 0; i < dfeat.size(); ++i) {
                g.dense_w[c][i] += dz[c] * fp.features[i];
                dfeat[i] += dz[c] * net.dense_w[c][i];
            }
        }

        // back through max-pool (winner takes the gradient) and ReLU
        const std::size_t pooled = net.pooled_per_row();
        for (std::size_t m = 0; m < net.kernel_count; ++m) {
            const auto& c_row = fp.conv_rows[m];
            for (std::size_t t = 0; t < pooled; ++t) {
                const std::size_t i = fp.argmax[m][t];
                if (c_row[i] <= 0.0) continue;  // ReLU gate
                const double dc = dfeat[m * pooled + t];
                if (dc == 0.0) continue;
                for (std::size_t j = 0; j < net.kernel_size; ++j)
                    g.kernels[m][j] += dc * inputs[n][i + j];
            }
        }
    }
    return g;
}

struct TrainLogEntry {
    int epoch = 0;
    double loss = 0.0;
};

// Full-batch gradient descent; the logged loss for an epoch is the loss
// evaluated before that epoch's update.
inline std::vector<TrainLogEntry> train(BaselineCnn& net,
                                        const std::vector<std::vector<double>>& inputs,
                                        const std::vector<int>& classes,
                                        const TrainConfig& cfg) {
    if (inputs.empty()) throw EmptyTrainSet();
    if (inputs.size() != classes.size())
        throw std::invalid_argument("inputs/classes size mismatch");

    std::vector<TrainLogEntry> log;
    log.reserve(static_cast<std::size_t>(cfg.epochs));
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        Gradients g = compute_gradients(net, inputs, classes);
        if (!std::isfinite(g.loss)) throw DivergedLoss(epoch);
        log.push_back({epoch, g.loss});

        const double lr = cfg.learning_rate;
        if (cfg.train_kernels) {
            for (std::size_t m = 0; m < net.kernel_count; ++m)
                for (std::size_t j = 0; j < net.kernel_size; ++j)
                    net.kernels[m].weights[j] -= lr * g.kernels[m][j];
        }
        for (std::size_t c = 0; c < 2; ++c) {
            for (std::size_t i = 0; i < net.dense_w[c].size(); ++i)
                net.dense_w[c][i] -= lr * g.dense_w[c][i];
            net.bias[c] -= lr * g.bias[c];
        }
    }
    return log;
}

inline double mse_loss(const BaselineCnn& net, const std::vector<std::vector<double>>& inputs,
                       const std::vector<int>& classes) {
    return compute_gradients(net, inputs, classes).loss;
}

struct Prediction {
    int class_index = 0;  // argmax; exact tie -> class 0
    std::array<double, 2> probs{0.0, 0.0};
};

inline Prediction predict(const BaselineCnn& net, std::span<const double> x) {
    const auto fp = detail::forward(net, x);
    return {fp.probs[0] >= fp.probs[1] ? 0 : 1, fp.probs};
}

}  // namespace bwc::cnn
