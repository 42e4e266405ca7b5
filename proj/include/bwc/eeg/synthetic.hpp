#pragma once

// Synthetic sub-session generator for desk-scale experiments: each class is
// a sinusoid at its own dominant frequency plus Gaussian noise, quantized to
// integer ADC units. Per-second attention values are drawn at random so the
// top-attention selection step has real work to do.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwc/eeg/types.hpp"
#include "bwc/rng.hpp"
#include "bwc/text.hpp"

namespace bwc::eeg {

struct InvalidSpec : std::runtime_error {
    explicit InvalidSpec(const std::string& what) : std::runtime_error("invalid spec: " + what) {}
};

struct ClassSignalSpec {
    ClassLabel label = ClassLabel::Red;
    double frequency_hz = 10.0;
    double amplitude = 20.0;  // ADC units
    double noise = 2.0;       // Gaussian standard deviation, ADC units
};

struct SynthSpec {
    Category category = Category::Color;
    Mode mode = Mode::Visible;
    int subjects = 6;
    int sessions = 5;
    int duration_s = 25;
    int records_per_second = 506;
    std::vector<ClassSignalSpec> classes;  // exactly two, matching the category
};

inline void validate(const SynthSpec& spec) {
    if (spec.subjects < 1) throw InvalidSpec("subjects must be >= 1");
    if (spec.sessions < 1) throw InvalidSpec("sessions must be >= 1");
    if (spec.duration_s < 1) throw InvalidSpec("duration_s must be >= 1");
    if (spec.records_per_second < 1) throw InvalidSpec("records_per_second must be >= 1");
    if (spec.classes.size() != 2) throw InvalidSpec("exactly two classes required");
    if (spec.classes[0].label == spec.classes[1].label)
        throw InvalidSpec("class labels must differ");
    for (const auto& c : spec.classes) {
        if (!label_matches_category(c.label, spec.category))
            throw InvalidSpec("label " + to_string(c.label) + " does not belong to category " +
                              to_string(spec.category));
        if (c.frequency_hz <= 0.0) throw InvalidSpec("frequency_hz must be > 0");
        if (c.amplitude <= 0.0) throw InvalidSpec("amplitude must be > 0");
        if (c.noise < 0.0) throw InvalidSpec("noise must be >= 0");
    }
}

namespace detail {

// Redraws in the (vanishingly rare) case every second got the same value,
// so top-attention selection always has a real ordering to work with.
inline std::vector<int> draw_per_second_metric(Rng& rng, int seconds) {
    std::vector<int> vals(static_cast<std::size_t>(seconds));
    do {
        for (auto& v : vals) v = rng.uniform_int(0, 100);
    } while (seconds > 1 &&
             std::all_of(vals.begin(), vals.end(), [&](int v) { return v == vals[0]; }));
    return vals;
}

}  // namespace detail

inline SubSession generate_synthetic_session(const ClassSignalSpec& cls, const SubSessionMeta& meta,
                                             int records_per_second, std::uint64_t seed) {
    if (cls.frequency_hz <= 0.0) throw InvalidSpec("frequency_hz must be > 0");
    if (cls.amplitude <= 0.0) throw InvalidSpec("amplitude must be > 0");
    if (cls.noise < 0.0) throw InvalidSpec("noise must be >= 0");
    if (meta.duration_s < 1) throw InvalidSpec("duration_s must be >= 1");
    if (records_per_second < 1) throw InvalidSpec("records_per_second must be >= 1");
    if (!label_matches_category(cls.label, meta.category))
        throw InvalidSpec("label does not belong to category");

    SubSession s;
    s.subject_id = meta.subject_id;
    s.category = meta.category;
    s.mode = meta.mode;
    s.label = cls.label;
    s.session_index = meta.session_index;
    s.duration_s = meta.duration_s;

    Rng rng(seed);
    const auto attention = detail::draw_per_second_metric(rng, meta.duration_s);
    const auto meditation = detail::draw_per_second_metric(rng, meta.duration_s);

    constexpr double two_pi = 6.283185307179586476925286766559;
    s.records.reserve(static_cast<std::size_t>(meta.duration_s) *
                      static_cast<std::size_t>(records_per_second));
    for (int sec = 0; sec < meta.duration_s; ++sec) {
        for (int k = 0; k < records_per_second; ++k) {
            RawRecord r;
            r.timestamp_ms = static_cast<std::int64_t>(sec) * 1000 +
                             static_cast<std::int64_t>(k) * 1000 / records_per_second;
            const double t = sec + static_cast<double>(k) / records_per_second;
            const double signal = cls.amplitude * std::sin(two_pi * cls.frequency_hz * t) +
                                  cls.noise * rng.gaussian();
            r.raw_eeg = static_cast<int>(std::llround(signal));
            r.attention = attention[static_cast<std::size_t>(sec)];
            r.meditation = meditation[static_cast<std::size_t>(sec)];
            r.signal_quality = 0;
            s.records.push_back(r);
        }
    }
    return s;
}

// Full recording protocol for one (category, mode): every subject records
// `sessions` sessions, each with one sub-session per class.
inline std::vector<SubSession> generate_synthetic_dataset(const SynthSpec& spec,
                                                          std::uint64_t seed) {
    validate(spec);
    std::vector<SubSession> out;
    out.reserve(static_cast<std::size_t>(spec.subjects) * static_cast<std::size_t>(spec.sessions) *
                spec.classes.size());
    for (int subj = 1; subj <= spec.subjects; ++subj) {
        for (int session = 1; session <= spec.sessions; ++session) {
            for (const auto& cls : spec.classes) {
                SubSessionMeta meta;
                meta.subject_id = "S" + std::string(subj < 10 ? "0" : "") + std::to_string(subj);
                meta.category = spec.category;
                meta.mode = spec.mode;
                meta.label = cls.label;
                meta.session_index = session;
                meta.duration_s = spec.duration_s;
                const std::string tag = meta.subject_id + "/" + to_string(spec.mode) + "/" +
                                        to_string(cls.label) + "/" + std::to_string(session);
                out.push_back(generate_synthetic_session(cls, meta, spec.records_per_second,
                                                         derive_seed(seed, tag)));
            }
        }
    }
    return out;
}

// Line-oriented spec file (key=value; '#' starts a comment line).
inline std::string synth_spec_text(const SynthSpec& spec) {
    std::string out;
    out += "category=" + to_string(spec.category) + "\n";
    out += "mode=" + to_string(spec.mode) + "\n";
    out += "subjects=" + std::to_string(spec.subjects) + "\n";
    out += "sessions=" + std::to_string(spec.sessions) + "\n";
    out += "duration_s=" + std::to_string(spec.duration_s) + "\n";
    out += "records_per_second=" + std::to_string(spec.records_per_second) + "\n";
    for (std::size_t i = 0; i < spec.classes.size(); ++i) {
        const auto& c = spec.classes[i];
        const std::string p = "class." + std::to_string(i) + ".";
        out += p + "label=" + to_string(c.label) + "\n";
        out += p + "frequency_hz=" + fmt_double(c.frequency_hz) + "\n";
        out += p + "amplitude=" + fmt_double(c.amplitude) + "\n";
        out += p + "noise=" + fmt_double(c.noise) + "\n";
    }
    return out;
}

inline SynthSpec parse_synth_spec(std::string_view text) {
    FieldMap f(text);
    SynthSpec spec;
    spec.category = parse_category(f.take("category"));
    spec.mode = parse_mode(f.take("mode"));
    spec.subjects = static_cast<int>(f.take_int("subjects"));
    spec.sessions = static_cast<int>(f.take_int("sessions"));
    spec.duration_s = static_cast<int>(f.take_int("duration_s"));
    spec.records_per_second = static_cast<int>(f.take_int("records_per_second"));
    spec.classes.clear();
    for (int i = 0; f.has("class." + std::to_string(i) + ".label"); ++i) {
        const std::string p = "class." + std::to_string(i) + ".";
        ClassSignalSpec c;
        c.label = parse_class_label(f.take(p + "label"));
        c.frequency_hz = f.take_double(p + "frequency_hz");
        c.amplitude = f.take_double(p + "amplitude");
        c.noise = f.take_double(p + "noise");
        spec.classes.push_back(c);
    }
    f.finish();
    validate(spec);
    return spec;
}

}  // namespace bwc::eeg
