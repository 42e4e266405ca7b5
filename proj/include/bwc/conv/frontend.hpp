#pragma once

// Convolution front end shared by both models: seeded random kernels and
// valid (no-padding, stride 1) 1D cross-correlation followed by ReLU.
// The hybrid model keeps these kernels frozen after initialization; the
// standard model trains them by backpropagation.

#include <algorithm>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "bwc/rng.hpp"

namespace bwc::conv {

struct KernelLongerThanInput : std::runtime_error {
    KernelLongerThanInput() : std::runtime_error("kernel is longer than the input signal") {}
};

struct Kernel {
    std::vector<double> weights;
    int id = 0;
};

// One classification instance as seen by the network: width 1, depth 1,
// height given by the sample count.
struct InputTensor {
    static constexpr int width = 1;
    static constexpr int depth = 1;
    std::span<const double> samples;

    explicit InputTensor(std::span<const double> s) : samples(s) {}
    std::size_t height() const { return samples.size(); }
};

struct FeatureMap {
    std::vector<std::vector<double>> rows;  // one row per kernel
};

// Weights drawn uniformly from the open interval (0, 1).
inline std::vector<Kernel> init_kernels(int count, int size, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Kernel> kernels(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        kernels[static_cast<std::size_t>(k)].id = k;
        auto& w = kernels[static_cast<std::size_t>(k)].weights;
        w.resize(static_cast<std::size_t>(size));
        for (auto& v : w) v = rng.open_unit();
    }
    return kernels;
}

// out[i] = sum_j x[i+j] * k[j], length len(x) - len(k) + 1.
inline std::vector<double> convolve1d(std::span<const double> x, const Kernel& k) {
    const std::size_t n = x.size();
    const std::size_t m = k.weights.size();
    if (m > n) throw KernelLongerThanInput();
    std::vector<double> out(n - m + 1);
    for (std::size_t i = 0; i + m <= n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < m; ++j) acc += x[i + j] * k.weights[j];
        out[i] = acc;
    }
    return out;
}

inline void relu_in_place(std::vector<double>& v) {
    for (auto& x : v) x = std::max(0.0, x);
}

inline std::vector<double> relu(std::vector<double> v) {
    relu_in_place(v);
    return v;
}

inline FeatureMap forward(const InputTensor& x, const std::vector<Kernel>& kernels) {
    FeatureMap fm;
    fm.rows.reserve(kernels.size());
    for (const auto& k : kernels) fm.rows.push_back(relu(convolve1d(x.samples, k)));
    return fm;
}

}  // namespace bwc::conv
