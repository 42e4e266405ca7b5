#pragma once

// End-to-end classifiers over prepared windows.
//
// Hybrid model: frozen random kernels -> valid 1D convolution -> ReLU ->
// single-level Coiflet-1 approximation coefficients -> evolved symbolic
// discriminant, classifying by output sign.
//
// Standard model: the same convolution front end (trainable) -> max pool ->
// flatten -> dense layer -> softmax, trained by full-batch gradient descent.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwc/cnn/baseline.hpp"
#include "bwc/conv/frontend.hpp"
#include "bwc/eeg/types.hpp"
#include "bwc/gp/alps.hpp"
#include "bwc/metrics/report.hpp"
#include "bwc/wavelet/coiflet.hpp"
#include "bwc/wavelet/features.hpp"

namespace bwc::model {

struct LabelPair {
    eeg::ClassLabel positive = eeg::ClassLabel::Red;
    eeg::ClassLabel negative = eeg::ClassLabel::Green;

    double target_of(eeg::ClassLabel l) const {
        if (l == positive) return +1.0;
        if (l == negative) return -1.0;
        throw std::invalid_argument("label " + eeg::to_string(l) +
                                    " is not part of this model's label pair");
    }

    eeg::ClassLabel label_of(int sign) const { return sign >= 0 ? positive : negative; }
};

// Positive class is the first-listed label of the category (Red, Forward).
inline LabelPair label_pair_for(eeg::Category c) {
    auto [pos, neg] = eeg::labels_for_category(c);
    return {pos, neg};
}

// Infers the pair from the windows present; requires exactly two labels of
// one category.
inline LabelPair infer_label_pair(const std::vector<eeg::Window>& windows) {
    if (windows.empty()) throw std::invalid_argument("no windows to infer labels from");
    const eeg::Category cat =
        (windows[0].label == eeg::ClassLabel::Red || windows[0].label == eeg::ClassLabel::Green)
            ? eeg::Category::Color
            : eeg::Category::Shape;
    const LabelPair pair = label_pair_for(cat);
    for (const auto& w : windows) {
        if (w.label != pair.positive && w.label != pair.negative)
            throw std::invalid_argument("windows mix labels from different categories");
    }
    return pair;
}

// ---- hybrid model ----

struct HybridConfig {
    gp::AlpsConfig alps;       // n_features is filled in during training
    bool per_row_vote = false; // score DWT rows independently and take a majority
    int kernel_count = 3;
    int kernel_size = 10;
};

struct HybridModel {
    std::vector<conv::Kernel> kernels;
    gp::Expr expression;
    LabelPair labels;
    bool per_row_vote = false;
    double train_mse = 0.0;
    std::uint64_t seed = 0;
    gp::AlpsConfig alps;  // configuration echo
};

inline std::vector<std::vector<double>> hybrid_feature_rows(const std::vector<conv::Kernel>& kernels,
                                                            const wavelet::CoifletFilter& filter,
                                                            std::span<const double> samples) {
    return wavelet::extract_feature_rows(conv::forward(conv::InputTensor(samples), kernels),
                                         filter);
}

inline gp::Dataset hybrid_dataset(const std::vector<conv::Kernel>& kernels, bool per_row_vote,
                                  const LabelPair& labels,
                                  const std::vector<eeg::Window>& windows) {
    const auto filter = wavelet::coiflet1();
    gp::Dataset data;
    for (const auto& w : windows) {
        const double target = labels.target_of(w.label);
        auto rows = hybrid_feature_rows(kernels, filter, w.samples);
        if (per_row_vote) {
            for (auto& row : rows) data.push_back({std::move(row), target});
        } else {
            std::vector<double> flat;
            for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
            data.push_back({std::move(flat), target});
        }
    }
    return data;
}

struct TrainedHybrid {
    HybridModel model;
    std::vector<gp::GenerationStats> history;
};

inline TrainedHybrid train_hybrid(const std::vector<eeg::Window>& train_windows,
                                  const LabelPair& labels, const HybridConfig& cfg,
                                  std::uint64_t seed) {
    if (train_windows.empty()) throw gp::EmptyData();
    TrainedHybrid out;
    out.model.kernels = conv::init_kernels(cfg.kernel_count, cfg.kernel_size,
                                           derive_seed(seed, "hybrid/kernels"));
    out.model.labels = labels;
    out.model.per_row_vote = cfg.per_row_vote;
    out.model.seed = seed;

    const gp::Dataset data =
        hybrid_dataset(out.model.kernels, cfg.per_row_vote, labels, train_windows);
    gp::AlpsConfig alps = cfg.alps;
    alps.n_features = static_cast<int>(data.front().features.size());
    alps.seed = derive_seed(seed, "hybrid/alps");
    out.model.alps = alps;

    auto result = gp::run_alps(alps, data);
    out.model.expression = std::move(result.best.genome);
    out.model.train_mse = result.best.fitness;
    out.history = std::move(result.history);
    return out;
}

inline eeg::ClassLabel predict_hybrid(const HybridModel& m, std::span<const double> samples) {
    const auto filter = wavelet::coiflet1();
    const auto rows = hybrid_feature_rows(m.kernels, filter, samples);
    int sign;
    if (m.per_row_vote) {
        int votes = 0;
        for (const auto& row : rows) votes += gp::classify(m.expression, row);
        sign = votes >= 0 ? +1 : -1;
    } else {
        std::vector<double> flat;
        for (const auto& row : rows) flat.insert(flat.end(), row.begin(), row.end());
        sign = gp::classify(m.expression, flat);
    }
    return m.labels.label_of(sign);
}

// Test-set MSE of the discriminant (the hybrid analogue of a test loss).
inline double hybrid_test_mse(const HybridModel& m, const std::vector<eeg::Window>& windows) {
    return gp::fitness_mse(m.expression,
                           hybrid_dataset(m.kernels, m.per_row_vote, m.labels, windows));
}

// ---- standard model ----

struct StandardModel {
    cnn::BaselineCnn net;
    LabelPair labels;  // class index 0 = positive label
    double train_loss = 0.0;
    std::uint64_t seed = 0;
    cnn::TrainConfig config;
};

struct TrainedStandard {
    StandardModel model;
    std::vector<cnn::TrainLogEntry> log;
};

inline TrainedStandard train_standard(const std::vector<eeg::Window>& train_windows,
                                      const LabelPair& labels, const cnn::TrainConfig& cfg,
                                      std::uint64_t seed, int kernel_count = 3,
                                      int kernel_size = 10) {
    if (train_windows.empty()) throw cnn::EmptyTrainSet();
    std::vector<std::vector<double>> inputs;
    std::vector<int> classes;
    inputs.reserve(train_windows.size());
    for (const auto& w : train_windows) {
        inputs.push_back(w.samples);
        classes.push_back(w.label == labels.positive ? 0 : 1);
    }

    TrainedStandard out;
    out.model.net = cnn::init_baseline(train_windows[0].samples.size(),
                                       static_cast<std::size_t>(kernel_count),
                                       static_cast<std::size_t>(kernel_size),
                                       derive_seed(seed, "standard/init"));
    out.model.labels = labels;
    out.model.seed = seed;
    out.model.config = cfg;
    out.log = cnn::train(out.model.net, inputs, classes, cfg);
    out.model.train_loss = cnn::mse_loss(out.model.net, inputs, classes);
    return out;
}

inline eeg::ClassLabel predict_standard(const StandardModel& m, std::span<const double> samples) {
    const auto pred = cnn::predict(m.net, samples);
    return pred.class_index == 0 ? m.labels.positive : m.labels.negative;
}

inline double standard_test_mse(const StandardModel& m, const std::vector<eeg::Window>& windows) {
    std::vector<std::vector<double>> inputs;
    std::vector<int> classes;
    for (const auto& w : windows) {
        inputs.push_back(w.samples);
        classes.push_back(w.label == m.labels.positive ? 0 : 1);
    }
    return cnn::mse_loss(m.net, inputs, classes);
}

// ---- evaluation ----

template <typename Model, typename PredictFn>
metrics::EvaluationReport evaluate_with(const Model& m, PredictFn&& predict_fn,
                                        const std::vector<eeg::Window>& test) {
    std::vector<std::pair<eeg::ClassLabel, eeg::ClassLabel>> outcomes;
    outcomes.reserve(test.size());
    for (const auto& w : test) outcomes.emplace_back(predict_fn(m, w.samples), w.label);
    const auto cm = metrics::accumulate(outcomes, m.labels.positive);
    return metrics::report(cm, eeg::to_string(m.labels.positive),
                           eeg::to_string(m.labels.negative));
}

inline metrics::EvaluationReport evaluate(const HybridModel& m,
                                          const std::vector<eeg::Window>& test) {
    return evaluate_with(m, [](const HybridModel& mm, std::span<const double> s) {
        return predict_hybrid(mm, s);
    }, test);
}

inline metrics::EvaluationReport evaluate(const StandardModel& m,
                                          const std::vector<eeg::Window>& test) {
    return evaluate_with(m, [](const StandardModel& mm, std::span<const double> s) {
        return predict_standard(mm, s);
    }, test);
}

struct IncompatibleTestSet : std::runtime_error {
    explicit IncompatibleTestSet(const std::string& what)
        : std::runtime_error("incompatible test set: " + what) {}
};

// Two artifacts can only be compared on a test set whose labels both cover.
inline void check_test_compatibility(const LabelPair& a, const LabelPair& b,
                                     const std::vector<eeg::Window>& test) {
    if (a.positive != b.positive || a.negative != b.negative)
        throw IncompatibleTestSet("artifacts were trained on different label pairs");
    if (test.empty()) throw IncompatibleTestSet("test set is empty");
    for (const auto& w : test) {
        if (w.label != a.positive && w.label != a.negative)
            throw IncompatibleTestSet("test window labeled " + eeg::to_string(w.label) +
                                      " does not match the artifacts' labels");
    }
}

}  // namespace bwc::model
