#pragma once

// The data-preparation pipeline: pick the highest-attention seconds of a
// sub-session, normalize each selected second to exactly 500 raw values
// (truncating in recording order, or nearest-neighbor upsampling when a
// second came up short), concatenate into 5000-sample windows, and split
// the window set for training and testing.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwc/eeg/types.hpp"
#include "bwc/rng.hpp"

namespace bwc::eeg {

struct InsufficientSeconds : std::runtime_error {
    std::size_t available;
    explicit InsufficientSeconds(std::size_t n)
        : std::runtime_error("sub-session has only " + std::to_string(n) +
                             " distinct seconds with records"),
          available(n) {}
};

struct SecondNotFound : std::runtime_error {
    explicit SecondNotFound(std::int64_t second)
        : std::runtime_error("no records in second " + std::to_string(second)) {}
};

struct EmptyInput : std::runtime_error {
    EmptyInput() : std::runtime_error("cannot interpolate an empty sequence") {}
};

struct TargetTooSmall : std::runtime_error {
    TargetTooSmall() : std::runtime_error("interpolation target is smaller than the input") {}
};

struct TooFewWindows : std::runtime_error {
    std::string class_name;
    explicit TooFewWindows(const std::string& label)
        : std::runtime_error("class " + label + " has fewer than 2 windows"), class_name(label) {}
};

namespace detail {

// Attention is a once-per-second metric repeated on each raw row; the
// per-second value is the maximum seen within that second.
inline std::map<std::int64_t, int> attention_by_second(const SubSession& s) {
    std::map<std::int64_t, int> att;
    for (const auto& r : s.records) {
        const std::int64_t sec = r.timestamp_ms / 1000;
        auto [it, inserted] = att.emplace(sec, r.attention);
        if (!inserted) it->second = std::max(it->second, r.attention);
    }
    return att;
}

}  // namespace detail

// The n highest-attention seconds, returned in chronological order.
// Ties go to the earlier second.
inline std::vector<std::int64_t> select_top_attention_seconds(const SubSession& s,
                                                              std::size_t n = kSecondsPerWindow) {
    auto att = detail::attention_by_second(s);
    if (att.size() < n) throw InsufficientSeconds(att.size());

    // std::map iterates seconds in chronological order; a stable sort by
    // descending attention therefore leaves ties in time order.
    std::vector<std::pair<std::int64_t, int>> ranked(att.begin(), att.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    ranked.resize(n);

    std::vector<std::int64_t> seconds;
    seconds.reserve(n);
    for (const auto& [sec, _] : ranked) seconds.push_back(sec);
    std::sort(seconds.begin(), seconds.end());
    return seconds;
}

// Nearest-neighbor upsampling: out[i] = x[round(i * (len-1) / (target-1))].
// Only ever repeats input values, never invents new ones.
inline std::vector<double> neighbor_interpolate(const std::vector<double>& x, std::size_t target) {
    if (x.empty()) throw EmptyInput();
    if (target < x.size()) throw TargetTooSmall();
    if (target == x.size()) return x;

    std::vector<double> out(target);
    if (x.size() == 1) {
        std::fill(out.begin(), out.end(), x[0]);
        return out;
    }
    const double scale = static_cast<double>(x.size() - 1) / static_cast<double>(target - 1);
    for (std::size_t i = 0; i < target; ++i) {
        const auto j = static_cast<std::size_t>(std::llround(static_cast<double>(i) * scale));
        out[i] = x[j];
    }
    return out;
}

// Exactly `target` raw values for one second: the first `target` in
// recording order when enough arrived, otherwise neighbor-interpolated.
inline std::vector<double> fetch_records_for_second(const SubSession& s, std::int64_t second,
                                                    std::size_t target = kRecordsPerSecond) {
    std::vector<double> values;
    for (const auto& r : s.records) {
        if (r.timestamp_ms / 1000 == second) values.push_back(static_cast<double>(r.raw_eeg));
    }
    if (values.empty()) throw SecondNotFound(second);
    if (values.size() >= target) {
        values.resize(target);
        return values;
    }
    return neighbor_interpolate(values, target);
}

// One window per sub-session: 10 selected seconds x 500 records each,
// concatenated chronologically.
inline Window build_window(const SubSession& s) {
    Window w;
    w.label = s.label;
    w.provenance.subject_id = s.subject_id;
    w.provenance.session_index = s.session_index;
    w.provenance.selected_seconds = select_top_attention_seconds(s);
    w.samples.reserve(kWindowSamples);
    for (std::int64_t sec : w.provenance.selected_seconds) {
        auto vals = fetch_records_for_second(s, sec);
        w.samples.insert(w.samples.end(), vals.begin(), vals.end());
    }
    return w;
}

inline std::vector<Window> build_windows(const std::vector<SubSession>& sessions) {
    std::vector<Window> windows;
    windows.reserve(sessions.size());
    for (const auto& s : sessions) windows.push_back(build_window(s));
    return windows;
}

// Stratified, seeded split. Per class, round(count * test_fraction) windows
// go to the test side; membership is decided by a seeded shuffle but both
// sides keep the original window order.
inline DatasetSplit split_train_test(const std::vector<Window>& windows, SplitRatio ratio,
                                     std::uint64_t seed) {
    std::map<ClassLabel, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < windows.size(); ++i) by_class[windows[i].label].push_back(i);
    for (const auto& [label, idx] : by_class) {
        if (idx.size() < 2) throw TooFewWindows(to_string(label));
    }

    const double test_frac = 1.0 - train_fraction(ratio);
    std::vector<bool> is_test(windows.size(), false);
    Rng rng(derive_seed(seed, "split"));
    for (auto& [label, idx] : by_class) {
        rng.shuffle(idx);
        const auto n_test = static_cast<std::size_t>(
            std::llround(static_cast<double>(idx.size()) * test_frac));
        for (std::size_t k = 0; k < n_test; ++k) is_test[idx[k]] = true;
    }

    DatasetSplit split;
    split.ratio = ratio;
    split.seed = seed;
    for (std::size_t i = 0; i < windows.size(); ++i) {
        (is_test[i] ? split.test : split.train).push_back(windows[i]);
    }
    return split;
}

}  // namespace bwc::eeg
