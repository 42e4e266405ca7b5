#pragma once

// Confusion-matrix accumulation and the four evaluation measures
// (accuracy, recall, precision, F-measure). Counts are kept at window
// level; record-level figures are the same counts times record_scale,
// since every classified window stands for a fixed number of raw records.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bwc::metrics {

struct EmptyPredictions : std::runtime_error {
    EmptyPredictions() : std::runtime_error("no predictions to accumulate") {}
};

struct UndefinedMetric : std::runtime_error {
    explicit UndefinedMetric(const std::string& which)
        : std::runtime_error("metric undefined (zero denominator): " + which) {}
};

struct ConfusionMatrix {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
    std::int64_t record_scale = 5000;  // records represented by one window

    std::int64_t total() const { return tp + fp + fn + tn; }

    ConfusionMatrix scaled() const {
        return {tp * record_scale, fp * record_scale, fn * record_scale,
                tn * record_scale, 1};
    }

    // Merge is associative and commutative, so partial matrices from
    // parallel evaluation can be combined in any order.
    ConfusionMatrix& operator+=(const ConfusionMatrix& o) {
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        tn += o.tn;
        return *this;
    }

    bool operator==(const ConfusionMatrix&) const = default;
};

template <typename Label>
ConfusionMatrix accumulate(const std::vector<std::pair<Label, Label>>& predicted_actual,
                           const Label& positive_class) {
    if (predicted_actual.empty()) throw EmptyPredictions();
    ConfusionMatrix cm;
    for (const auto& [predicted, actual] : predicted_actual) {
        const bool pred_pos = predicted == positive_class;
        const bool act_pos = actual == positive_class;
        if (pred_pos && act_pos)
            ++cm.tp;
        else if (pred_pos && !act_pos)
            ++cm.fp;
        else if (!pred_pos && act_pos)
            ++cm.fn;
        else
            ++cm.tn;
    }
    return cm;
}

inline double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw UndefinedMetric("accuracy");
    return static_cast<double>(cm.tn + cm.tp) / static_cast<double>(cm.total());
}

inline double recall(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0) throw UndefinedMetric("recall");
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

inline double precision(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fp == 0) throw UndefinedMetric("precision");
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
}

inline double f_measure(const ConfusionMatrix& cm) {
    const double r = recall(cm);
    const double p = precision(cm);
    if (r + p == 0.0) throw UndefinedMetric("f_measure");
    return 2.0 * r * p / (r + p);
}

}  // namespace bwc::metrics
