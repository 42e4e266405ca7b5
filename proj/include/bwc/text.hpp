#pragma once

// Small text helpers shared by the CSV, manifest, and artifact formats.
// Doubles are written with std::to_chars (shortest round-trip form) so that
// serialized files are byte-stable across runs and re-parse exactly.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace bwc {

inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return v;
}

inline std::optional<std::int64_t> parse_int(std::string_view s) {
    std::int64_t v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last) return std::nullopt;
    return v;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

// One "key=value" line; returns nullopt for blank and '#' comment lines.
struct KeyValue {
    std::string key;
    std::string value;
};

struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& what) : std::runtime_error(what) {}
};

inline std::string join_doubles(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += fmt_double(v[i]);
    }
    return out;
}

inline std::vector<double> parse_double_list(std::string_view s) {
    std::vector<double> out;
    for (const auto tok : split(s, ' ')) {
        if (tok.empty()) continue;
        const auto v = parse_double(tok);
        if (!v) throw FieldError("bad number in list: '" + std::string(tok) + "'");
        out.push_back(*v);
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::optional<KeyValue> parse_key_value(std::string_view line) {
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') return std::nullopt;
    std::size_t eq = t.find('=');
    if (eq == std::string_view::npos)
        throw std::runtime_error("expected key=value, got: " + std::string(t));
    return KeyValue{std::string(trim(t.substr(0, eq))), std::string(trim(t.substr(eq + 1)))};
}

// key=value lines with strict consumption: every field must be taken exactly
// once, and no unknown fields may remain when finish() is called.
class FieldMap {
public:
    explicit FieldMap(std::string_view text) {
        for (const auto line : split(text, '\n')) {
            const auto kv = parse_key_value(line);
            if (!kv) continue;  // blank or comment
            if (!fields_.emplace(std::string(kv->key), std::string(kv->value)).second)
                throw FieldError("duplicate field '" + std::string(kv->key) + "'");
        }
    }

    bool has(std::string_view key) const { return fields_.find(key) != fields_.end(); }
    bool empty() const { return fields_.empty(); }

    std::string take(std::string_view key) {
        const auto it = fields_.find(key);
        if (it == fields_.end()) throw FieldError("missing field '" + std::string(key) + "'");
        std::string v = std::move(it->second);
        fields_.erase(it);
        return v;
    }

    std::string take_or(std::string_view key, std::string_view fallback) {
        return has(key) ? take(key) : std::string(fallback);
    }

    double take_double(std::string_view key) {
        const auto s = take(key);
        const auto v = parse_double(s);
        if (!v) throw FieldError("field '" + std::string(key) + "' is not a number: " + s);
        return *v;
    }

    std::int64_t take_int(std::string_view key) {
        const auto s = take(key);
        const auto v = parse_int(s);
        if (!v) throw FieldError("field '" + std::string(key) + "' is not an integer: " + s);
        return *v;
    }

    std::uint64_t take_seed(std::string_view key) {
        const auto s = take(key);
        std::uint64_t v = 0;
        const char* end = s.data() + s.size();
        const auto res = std::from_chars(s.data(), end, v);
        if (res.ec != std::errc() || res.ptr != end)
            throw FieldError("field '" + std::string(key) + "' is not a seed: " + s);
        return v;
    }

    bool take_flag(std::string_view key) {
        const auto s = take(key);
        if (s == "0") return false;
        if (s == "1") return true;
        throw FieldError("field '" + std::string(key) + "' must be 0 or 1, got " + s);
    }

    std::vector<double> take_doubles(std::string_view key) {
        return parse_double_list(take(key));
    }

    void finish() const {
        if (!fields_.empty())
            throw FieldError("unknown field '" + fields_.begin()->first + "'");
    }

    const std::map<std::string, std::string, std::less<>>& remaining() const { return fields_; }

private:
    std::map<std::string, std::string, std::less<>> fields_;
};

}  // namespace bwc
