#pragma once

// Domain types for the recording protocol: raw device records, labeled
// 25-second sub-sessions, and the prepared 5000-sample windows that the
// classifiers consume.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bwc::eeg {

enum class Category { Color, Shape };
enum class Mode { Visible, Invisible };
enum class ClassLabel { Red, Green, Forward, Right };

inline std::string to_string(Category c) { return c == Category::Color ? "Color" : "Shape"; }
inline std::string to_string(Mode m) { return m == Mode::Visible ? "Visible" : "Invisible"; }

inline std::string to_string(ClassLabel l) {
    switch (l) {
        case ClassLabel::Red: return "Red";
        case ClassLabel::Green: return "Green";
        case ClassLabel::Forward: return "Forward";
        case ClassLabel::Right: return "Right";
    }
    return "?";
}

inline Category parse_category(std::string_view s) {
    if (s == "Color") return Category::Color;
    if (s == "Shape") return Category::Shape;
    throw std::runtime_error("unknown category: " + std::string(s));
}

inline Mode parse_mode(std::string_view s) {
    if (s == "Visible") return Mode::Visible;
    if (s == "Invisible") return Mode::Invisible;
    throw std::runtime_error("unknown mode: " + std::string(s));
}

inline ClassLabel parse_class_label(std::string_view s) {
    if (s == "Red") return ClassLabel::Red;
    if (s == "Green") return ClassLabel::Green;
    if (s == "Forward") return ClassLabel::Forward;
    if (s == "Right") return ClassLabel::Right;
    throw std::runtime_error("unknown class label: " + std::string(s));
}

inline bool label_matches_category(ClassLabel l, Category c) {
    const bool color_label = l == ClassLabel::Red || l == ClassLabel::Green;
    return color_label == (c == Category::Color);
}

// The two labels of a category, positive class first.
inline std::pair<ClassLabel, ClassLabel> labels_for_category(Category c) {
    if (c == Category::Color) return {ClassLabel::Red, ClassLabel::Green};
    return {ClassLabel::Forward, ClassLabel::Right};
}

struct RawRecord {
    std::int64_t timestamp_ms = 0;  // since sub-session start
    int raw_eeg = 0;                // device ADC units
    int attention = 0;              // 0..100
    int meditation = 0;             // 0..100
    int signal_quality = 0;         // 0..200, 0 = good contact
    std::optional<int> blink_strength;
};

// Everything that identifies a sub-session except the records themselves.
struct SubSessionMeta {
    std::string subject_id;
    Category category = Category::Color;
    Mode mode = Mode::Visible;
    ClassLabel label = ClassLabel::Red;
    int session_index = 1;
    int duration_s = 25;
};

struct SubSession {
    std::string subject_id;
    Category category = Category::Color;
    Mode mode = Mode::Visible;
    ClassLabel label = ClassLabel::Red;
    int session_index = 1;  // 1..5
    int duration_s = 25;
    std::vector<RawRecord> records;

    SubSessionMeta meta() const {
        return {subject_id, category, mode, label, session_index, duration_s};
    }
};

inline constexpr std::size_t kSecondsPerWindow = 10;
inline constexpr std::size_t kRecordsPerSecond = 500;
inline constexpr std::size_t kWindowSamples = kSecondsPerWindow * kRecordsPerSecond;

struct WindowProvenance {
    std::string subject_id;
    int session_index = 0;
    std::vector<std::int64_t> selected_seconds;  // chronological
};

struct Window {
    ClassLabel label = ClassLabel::Red;
    std::vector<double> samples;  // exactly kWindowSamples
    WindowProvenance provenance;
};

enum class SplitRatio { R70_30, R75_25, R80_20 };

inline double train_fraction(SplitRatio r) {
    switch (r) {
        case SplitRatio::R70_30: return 0.70;
        case SplitRatio::R75_25: return 0.75;
        case SplitRatio::R80_20: return 0.80;
    }
    return 0.80;
}

inline std::string to_string(SplitRatio r) {
    switch (r) {
        case SplitRatio::R70_30: return "70/30";
        case SplitRatio::R75_25: return "75/25";
        case SplitRatio::R80_20: return "80/20";
    }
    return "?";
}

inline SplitRatio parse_split_ratio(std::string_view s) {
    if (s == "70/30") return SplitRatio::R70_30;
    if (s == "75/25") return SplitRatio::R75_25;
    if (s == "80/20") return SplitRatio::R80_20;
    throw std::runtime_error("unknown split ratio (expected 70/30, 75/25 or 80/20): " +
                             std::string(s));
}

struct DatasetSplit {
    std::vector<Window> train;
    std::vector<Window> test;
    SplitRatio ratio = SplitRatio::R80_20;
    std::uint64_t seed = 0;
};

}  // namespace bwc::eeg
