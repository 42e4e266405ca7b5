#pragma once

// CSV formats: one file per sub-session of raw device records, a merged
// per-(category, mode) file of prepared windows, and the dataset manifest
// listing sub-session files with their labels.
//
// Sub-session columns: timestamp_ms,raw_eeg,attention,meditation,
// signal_quality,blink_strength. The attention/meditation device metrics
// arrive once per second, so files repeat the current value on every raw
// row; blink_strength may be empty.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwc/eeg/types.hpp"
#include "bwc/text.hpp"

namespace bwc::eeg {

struct MissingFile : std::runtime_error {
    explicit MissingFile(const std::string& path) : std::runtime_error("missing file: " + path) {}
};

struct MalformedRow : std::runtime_error {
    std::size_t line_no;
    MalformedRow(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_no(line) {}
};

struct EmptySession : std::runtime_error {
    EmptySession() : std::runtime_error("sub-session file contains no data rows") {}
};

inline constexpr std::string_view kSubSessionHeader =
    "timestamp_ms,raw_eeg,attention,meditation,signal_quality,blink_strength";

namespace detail {

inline int parse_bounded_int(std::string_view field, int lo, int hi, std::size_t line,
                             const char* name) {
    auto v = parse_int(field);
    if (!v || *v < lo || *v > hi)
        throw MalformedRow(line, std::string(name) + " out of range or not a number: \"" +
                                     std::string(field) + "\"");
    return static_cast<int>(*v);
}

}  // namespace detail

inline SubSession parse_subsession_csv(const std::filesystem::path& path,
                                       const SubSessionMeta& meta) {
    if (!label_matches_category(meta.label, meta.category))
        throw std::invalid_argument("label " + to_string(meta.label) +
                                    " does not belong to category " + to_string(meta.category));
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());

    SubSession s;
    s.subject_id = meta.subject_id;
    s.category = meta.category;
    s.mode = meta.mode;
    s.label = meta.label;
    s.session_index = meta.session_index;
    s.duration_s = meta.duration_s;

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw EmptySession();
    ++line_no;
    if (trim(line) != kSubSessionHeader)
        throw MalformedRow(line_no, "unexpected header: \"" + line + "\"");

    std::int64_t last_ts = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split(trim(line), ',');
        if (fields.size() != 6)
            throw MalformedRow(line_no, "expected 6 fields, got " + std::to_string(fields.size()));

        RawRecord r;
        auto ts = parse_int(fields[0]);
        if (!ts || *ts < 0) throw MalformedRow(line_no, "bad timestamp_ms");
        r.timestamp_ms = *ts;
        if (r.timestamp_ms < last_ts)
            throw MalformedRow(line_no, "timestamp_ms decreases within the sub-session");
        last_ts = r.timestamp_ms;

        auto raw = parse_int(fields[1]);
        if (!raw) throw MalformedRow(line_no, "bad raw_eeg: \"" + std::string(fields[1]) + "\"");
        r.raw_eeg = static_cast<int>(*raw);
        r.attention = detail::parse_bounded_int(fields[2], 0, 100, line_no, "attention");
        r.meditation = detail::parse_bounded_int(fields[3], 0, 100, line_no, "meditation");
        r.signal_quality = detail::parse_bounded_int(fields[4], 0, 200, line_no, "signal_quality");
        if (!trim(fields[5]).empty()) {
            auto b = parse_int(fields[5]);
            if (!b || *b < 0) throw MalformedRow(line_no, "bad blink_strength");
            r.blink_strength = static_cast<int>(*b);
        }
        s.records.push_back(r);
    }
    if (s.records.empty()) throw EmptySession();
    return s;
}

inline void write_subsession_csv(std::ostream& out, const SubSession& s) {
    out << kSubSessionHeader << "\n";
    for (const auto& r : s.records) {
        out << r.timestamp_ms << ',' << r.raw_eeg << ',' << r.attention << ',' << r.meditation
            << ',' << r.signal_quality << ',';
        if (r.blink_strength) out << *r.blink_strength;
        out << "\n";
    }
}

inline void write_subsession_csv(const std::filesystem::path& path, const SubSession& s) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    write_subsession_csv(out, s);
}

// ---- merged window CSV (columns: window_id,label,sample_index,value) ----

inline constexpr std::string_view kWindowHeader = "window_id,label,sample_index,value";

inline void write_windows_csv(std::ostream& out, const std::vector<Window>& windows) {
    out << kWindowHeader << "\n";
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const std::string label = to_string(windows[w].label);
        for (std::size_t i = 0; i < windows[w].samples.size(); ++i) {
            out << w << ',' << label << ',' << i << ',' << fmt_double(windows[w].samples[i])
                << "\n";
        }
    }
}

inline void write_windows_csv(const std::filesystem::path& path,
                              const std::vector<Window>& windows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    write_windows_csv(out, windows);
}

inline std::vector<Window> read_windows_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw EmptySession();
    ++line_no;
    if (trim(line) != kWindowHeader)
        throw MalformedRow(line_no, "unexpected header: \"" + line + "\"");

    std::vector<Window> windows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split(trim(line), ',');
        if (fields.size() != 4)
            throw MalformedRow(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
        auto id = parse_int(fields[0]);
        auto idx = parse_int(fields[2]);
        auto value = parse_double(fields[3]);
        if (!id || !idx || !value) throw MalformedRow(line_no, "bad numeric field");
        if (*id != static_cast<std::int64_t>(windows.size()) - 1) {
            if (*id != static_cast<std::int64_t>(windows.size()))
                throw MalformedRow(line_no, "window_id out of order");
            windows.emplace_back();
            windows.back().label = parse_class_label(fields[1]);
        }
        Window& w = windows.back();
        if (w.label != parse_class_label(fields[1]))
            throw MalformedRow(line_no, "label changes within a window");
        if (*idx != static_cast<std::int64_t>(w.samples.size()))
            throw MalformedRow(line_no, "sample_index out of order");
        w.samples.push_back(*value);
    }
    if (windows.empty()) throw EmptySession();
    return windows;
}

// ---- dataset manifest ----
//
// Line-oriented: optional `key=value` settings (only `base_dir` is known),
// '#' comments, and one line per sub-session file:
//   path,subject,category,mode,label,session

struct ManifestEntry {
    std::filesystem::path path;
    SubSessionMeta meta;
};

struct Manifest {
    std::filesystem::path base_dir;
    std::vector<ManifestEntry> entries;
};

inline Manifest parse_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path.string());
    Manifest m;
    m.base_dir = path.has_parent_path() ? path.parent_path() : ".";

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        if (t.find(',') == std::string_view::npos) {
            auto kv = parse_key_value(t);
            if (!kv) continue;
            if (kv->key == "base_dir")
                m.base_dir = kv->value;
            else
                throw MalformedRow(line_no, "unknown manifest key: " + kv->key);
            continue;
        }
        auto fields = split(t, ',');
        if (fields.size() != 6)
            throw MalformedRow(line_no, "expected path,subject,category,mode,label,session");
        ManifestEntry e;
        std::filesystem::path p{std::string(trim(fields[0]))};
        e.path = p.is_absolute() ? p : m.base_dir / p;
        e.meta.subject_id = std::string(trim(fields[1]));
        e.meta.category = parse_category(trim(fields[2]));
        e.meta.mode = parse_mode(trim(fields[3]));
        e.meta.label = parse_class_label(trim(fields[4]));
        auto session = parse_int(trim(fields[5]));
        if (!session || *session < 1) throw MalformedRow(line_no, "bad session index");
        e.meta.session_index = static_cast<int>(*session);
        if (!label_matches_category(e.meta.label, e.meta.category))
            throw MalformedRow(line_no, "label does not belong to category");
        m.entries.push_back(std::move(e));
    }
    return m;
}

}  // namespace bwc::eeg
