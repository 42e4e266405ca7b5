#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

#include "bwc/eeg/csv.hpp"
#include "bwc/eeg/prepare.hpp"
#include "bwc/eeg/types.hpp"
#include "bwc/rng.hpp"
#include "bwc/text.hpp"

#include "helpers.hpp"

using namespace bwc::eeg;

namespace {

// Session with a chosen record count per second and per-second attention.
SubSession make_session(const std::vector<int>& per_second_counts,
                        const std::vector<int>& attention, ClassLabel label = ClassLabel::Red) {
    SubSession s;
    s.subject_id = "S01";
    s.category = ClassLabel::Red == label || label == ClassLabel::Green ? Category::Color
                                                                        : Category::Shape;
    s.label = label;
    s.duration_s = static_cast<int>(per_second_counts.size());
    int value = 0;
    for (std::size_t sec = 0; sec < per_second_counts.size(); ++sec) {
        const int count = per_second_counts[sec];
        for (int k = 0; k < count; ++k) {
            RawRecord r;
            r.timestamp_ms = static_cast<std::int64_t>(sec) * 1000 +
                             (1000 * k) / std::max(count, 1);
            r.raw_eeg = value++;
            r.attention = attention[sec];
            r.meditation = 50;
            r.signal_quality = 0;
            s.records.push_back(r);
        }
    }
    return s;
}

std::vector<Window> two_class_windows(std::size_t per_class) {
    std::vector<Window> ws;
    for (std::size_t i = 0; i < 2 * per_class; ++i) {
        Window w;
        w.label = i < per_class ? ClassLabel::Red : ClassLabel::Green;
        w.samples.assign(8, static_cast<double>(i));
        ws.push_back(std::move(w));
    }
    return ws;
}

}  // namespace

TEST_CASE("per-second attention takes the maximum within the second", "[prepare]") {
    SubSession s;
    s.records = {
        {0, 1, 10, 0, 0, {}}, {500, 2, 30, 0, 0, {}},   // second 0 -> 30
        {1000, 3, 20, 0, 0, {}}, {1999, 4, 5, 0, 0, {}} // second 1 -> 20
    };
    const auto att = bwc::eeg::detail::attention_by_second(s);
    REQUIRE(att.size() == 2);
    CHECK(att.at(0) == 30);
    CHECK(att.at(1) == 20);
}

TEST_CASE("top-attention selection is chronological with ties to earlier seconds", "[prepare]") {
    // attention per second: 5 9 9 1 7 7 7 2 8 3 4 6  (12 seconds)
    const std::vector<int> att{5, 9, 9, 1, 7, 7, 7, 2, 8, 3, 4, 6};
    const auto s = make_session(std::vector<int>(att.size(), 3), att);
    const auto top = select_top_attention_seconds(s, 10);
    // two lowest (1 at sec 3, 2 at sec 7) drop out
    CHECK(top == std::vector<std::int64_t>{0, 1, 2, 4, 5, 6, 8, 9, 10, 11});

    // exact tie across more seconds than needed: earliest seconds win
    const std::vector<int> flat(12, 50);
    const auto s2 = make_session(std::vector<int>(flat.size(), 3), flat);
    CHECK(select_top_attention_seconds(s2, 10) ==
          std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
}

TEST_CASE("selection needs at least n distinct seconds", "[prepare]") {
    const auto s = make_session({3, 3, 3}, {1, 2, 3});
    CHECK_THROWS_AS(select_top_attention_seconds(s, 10), InsufficientSeconds);
    try {
        select_top_attention_seconds(s, 10);
    } catch (const InsufficientSeconds& e) {
        CHECK(e.available == 3);
    }
}

TEST_CASE("neighbor interpolation repeats nearest values", "[prepare]") {
    CHECK(neighbor_interpolate({1.0, 2.0}, 4) == std::vector<double>{1.0, 1.0, 2.0, 2.0});
    CHECK(neighbor_interpolate({7.0}, 3) == std::vector<double>{7.0, 7.0, 7.0});
    CHECK(neighbor_interpolate({1.0, 2.0, 3.0}, 3) == std::vector<double>{1.0, 2.0, 3.0});
    CHECK_THROWS_AS(neighbor_interpolate({}, 5), EmptyInput);
    CHECK_THROWS_AS(neighbor_interpolate({1.0, 2.0, 3.0}, 2), TargetTooSmall);
}

TEST_CASE("interpolation never invents values and keeps order", "[prepare]") {
    bwc::Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> x(1 + rng.below(499));
        for (auto& v : x) v = rng.uniform(-100.0, 100.0);
        const auto out = neighbor_interpolate(x, 500);
        REQUIRE(out.size() == 500);

        // multiset containment: every output value is an input value
        std::multiset<double> pool(x.begin(), x.end());
        for (const double v : out) REQUIRE(pool.count(v) > 0);

        // endpoints map to endpoints, and relative order is preserved
        CHECK(out.front() == x.front());
        CHECK(out.back() == x.back());
    }
}

TEST_CASE("fetch_records_for_second truncates or upsamples to 500", "[prepare]") {
    const auto rich = make_session({520, 520, 520, 520, 520, 520, 520, 520, 520, 520},
                                   {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const auto vals = fetch_records_for_second(rich, 0);
    REQUIRE(vals.size() == 500);
    CHECK(vals[0] == 0.0);    // recording order preserved
    CHECK(vals[499] == 499.0);

    const auto sparse = make_session({400, 400, 400, 400, 400, 400, 400, 400, 400, 400},
                                     {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    const auto up = fetch_records_for_second(sparse, 2);
    REQUIRE(up.size() == 500);
    std::multiset<double> pool;
    for (const auto& r : sparse.records)
        if (r.timestamp_ms / 1000 == 2) pool.insert(static_cast<double>(r.raw_eeg));
    for (const double v : up) REQUIRE(pool.count(v) > 0);

    CHECK_THROWS_AS(fetch_records_for_second(rich, 99), SecondNotFound);
}

TEST_CASE("every window has exactly 5000 samples (property)", "[prepare]") {
    bwc::Rng rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        const int seconds = 10 + static_cast<int>(rng.below(16));
        std::vector<int> counts(seconds);
        std::vector<int> att(seconds);
        for (auto& c : counts) c = 400 + static_cast<int>(rng.below(121));  // 400..520
        for (auto& a : att) a = static_cast<int>(rng.below(101));
        const auto s = make_session(counts, att);
        const auto w = build_window(s);
        REQUIRE(w.samples.size() == kWindowSamples);
        REQUIRE(w.provenance.selected_seconds.size() == kSecondsPerWindow);
        REQUIRE(std::is_sorted(w.provenance.selected_seconds.begin(),
                               w.provenance.selected_seconds.end()));
    }
}

TEST_CASE("window samples come from the selected seconds in order", "[prepare]") {
    // 12 seconds, second `sec` holds values in [1000*sec, 1000*sec+520)
    SubSession s;
    s.label = ClassLabel::Green;
    std::vector<int> att{1, 9, 9, 9, 9, 9, 9, 9, 9, 9, 9, 2};  // drop seconds 0 and 11
    for (int sec = 0; sec < 12; ++sec) {
        for (int k = 0; k < 520; ++k) {
            RawRecord r;
            r.timestamp_ms = sec * 1000 + k;
            r.raw_eeg = 1000 * sec + k;
            r.attention = att[static_cast<std::size_t>(sec)];
            s.records.push_back(r);
        }
    }
    const auto w = build_window(s);
    CHECK(w.label == ClassLabel::Green);
    CHECK(w.provenance.selected_seconds ==
          std::vector<std::int64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(w.samples[0] == 1000.0);          // second 1, first record
    CHECK(w.samples[499] == 1499.0);        // second 1, record 499
    CHECK(w.samples[500] == 2000.0);        // second 2 starts
    CHECK(w.samples[4999] == 10499.0);      // second 10, record 499
}

TEST_CASE("split is stratified, seeded, and order-preserving", "[prepare]") {
    const auto ws = two_class_windows(30);  // 30 Red + 30 Green
    const auto split = split_train_test(ws, SplitRatio::R80_20, 7);

    CHECK(split.train.size() == 48);
    CHECK(split.test.size() == 12);
    auto count = [](const std::vector<Window>& v, ClassLabel l) {
        return std::count_if(v.begin(), v.end(), [&](const Window& w) { return w.label == l; });
    };
    CHECK(count(split.test, ClassLabel::Red) == 6);
    CHECK(count(split.test, ClassLabel::Green) == 6);

    // reproducible with the same seed, different with another
    const auto again = split_train_test(ws, SplitRatio::R80_20, 7);
    REQUIRE(again.test.size() == split.test.size());
    for (std::size_t i = 0; i < split.test.size(); ++i)
        CHECK(again.test[i].samples == split.test[i].samples);
    const auto other = split_train_test(ws, SplitRatio::R80_20, 8);
    bool any_diff = other.test.size() != split.test.size();
    for (std::size_t i = 0; !any_diff && i < split.test.size(); ++i)
        any_diff = other.test[i].samples != split.test[i].samples;
    CHECK(any_diff);

    // order preserved within each side
    auto ordered = [](const std::vector<Window>& v) {
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i].samples[0] < v[i - 1].samples[0]) return false;
        return true;
    };
    CHECK(ordered(split.train));
    CHECK(ordered(split.test));

    // train + test = original multiset
    CHECK(split.train.size() + split.test.size() == ws.size());
}

TEST_CASE("split ratios produce the documented sizes", "[prepare]") {
    const auto ws = two_class_windows(20);  // 20 per class
    CHECK(split_train_test(ws, SplitRatio::R70_30, 1).test.size() == 12);  // 6 per class
    CHECK(split_train_test(ws, SplitRatio::R75_25, 1).test.size() == 10);
    CHECK(split_train_test(ws, SplitRatio::R80_20, 1).test.size() == 8);

    std::vector<Window> tiny = two_class_windows(1);
    CHECK_THROWS_AS(split_train_test(tiny, SplitRatio::R80_20, 1), TooFewWindows);
}

TEST_CASE("sub-session CSV round-trips", "[prepare]") {
    testutil::TempDir dir("prepare_csv");
    auto s = make_session({5, 5}, {10, 20});
    s.records[3].blink_strength = 55;

    const auto path = dir / "s.csv";
    write_subsession_csv(path, s);
    SubSessionMeta meta;
    meta.subject_id = "S01";
    meta.duration_s = 2;
    const auto back = parse_subsession_csv(path, meta);
    REQUIRE(back.records.size() == s.records.size());
    for (std::size_t i = 0; i < s.records.size(); ++i) {
        CHECK(back.records[i].timestamp_ms == s.records[i].timestamp_ms);
        CHECK(back.records[i].raw_eeg == s.records[i].raw_eeg);
        CHECK(back.records[i].attention == s.records[i].attention);
        CHECK(back.records[i].meditation == s.records[i].meditation);
        CHECK(back.records[i].signal_quality == s.records[i].signal_quality);
        CHECK(back.records[i].blink_strength == s.records[i].blink_strength);
    }
}

TEST_CASE("sub-session CSV parser rejects malformed input", "[prepare]") {
    testutil::TempDir dir("prepare_bad");
    SubSessionMeta meta;

    auto expect_malformed = [&](const std::string& name, const std::string& content,
                                std::size_t bad_line) {
        const auto p = dir / name;
        bwc::write_file(p.string(), content);
        try {
            parse_subsession_csv(p, meta);
            FAIL("expected MalformedRow for " << name);
        } catch (const MalformedRow& e) {
            CHECK(e.line_no == bad_line);
        }
    };

    const std::string header(kSubSessionHeader);
    expect_malformed("bad_header.csv", "time,eeg\n0,1,2,3,4,\n", 1);
    expect_malformed("five_fields.csv", header + "\n0,1,2,3,4\n", 2);
    expect_malformed("att_range.csv", header + "\n0,1,101,3,4,\n", 2);
    expect_malformed("sq_range.csv", header + "\n0,1,10,3,201,\n", 2);
    expect_malformed("ts_decreasing.csv", header + "\n5,1,10,3,4,\n4,1,10,3,4,\n", 3);
    expect_malformed("bad_blink.csv", header + "\n0,1,10,3,4,-2\n", 2);

    const auto empty = dir / "empty.csv";
    bwc::write_file(empty.string(), "");
    CHECK_THROWS_AS(parse_subsession_csv(empty, meta), EmptySession);
    const auto header_only = dir / "header_only.csv";
    bwc::write_file(header_only.string(), header + "\n");
    CHECK_THROWS_AS(parse_subsession_csv(header_only, meta), EmptySession);
    CHECK_THROWS_AS(parse_subsession_csv(dir / "missing.csv", meta), MissingFile);

    SubSessionMeta bad_meta;
    bad_meta.category = Category::Color;
    bad_meta.label = ClassLabel::Forward;
    CHECK_THROWS_AS(parse_subsession_csv(empty, bad_meta), std::invalid_argument);
}

TEST_CASE("window CSV round-trips and validates ordering", "[prepare]") {
    testutil::TempDir dir("prepare_windows");
    std::vector<Window> ws;
    for (int i = 0; i < 3; ++i) {
        Window w;
        w.label = i == 1 ? ClassLabel::Green : ClassLabel::Red;
        w.samples = {1.5 * i, -2.25, 3.0 + i, 0.0};
        ws.push_back(std::move(w));
    }
    const auto path = dir / "w.csv";
    write_windows_csv(path, ws);
    const auto back = read_windows_csv(path);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].label == ws[i].label);
        CHECK(back[i].samples == ws[i].samples);
    }

    const std::string hdr(kWindowHeader);
    const auto bad1 = dir / "id_jump.csv";
    bwc::write_file(bad1.string(), hdr + "\n0,Red,0,1\n2,Red,0,1\n");
    CHECK_THROWS_AS(read_windows_csv(bad1), MalformedRow);
    const auto bad2 = dir / "label_change.csv";
    bwc::write_file(bad2.string(), hdr + "\n0,Red,0,1\n0,Green,1,1\n");
    CHECK_THROWS_AS(read_windows_csv(bad2), MalformedRow);
    const auto bad3 = dir / "index_gap.csv";
    bwc::write_file(bad3.string(), hdr + "\n0,Red,0,1\n0,Red,2,1\n");
    CHECK_THROWS_AS(read_windows_csv(bad3), MalformedRow);
}

TEST_CASE("manifest parsing resolves paths and validates labels", "[prepare]") {
    testutil::TempDir dir("prepare_manifest");
    const std::string manifest_text =
        "# comment line\n"
        "a.csv,S01,Color,Visible,Red,1\n"
        "sub/b.csv,S02,Shape,Invisible,Forward,3\n";
    const auto mp = dir / "manifest.txt";
    bwc::write_file(mp.string(), manifest_text);
    const auto m = parse_manifest(mp);
    REQUIRE(m.entries.size() == 2);
    CHECK(m.entries[0].path == dir.path / "a.csv");
    CHECK(m.entries[1].path == dir.path / "sub" / "b.csv");
    CHECK(m.entries[0].meta.subject_id == "S01");
    CHECK(m.entries[1].meta.category == Category::Shape);
    CHECK(m.entries[1].meta.label == ClassLabel::Forward);
    CHECK(m.entries[1].meta.session_index == 3);

    const auto mp2 = dir / "manifest2.txt";
    bwc::write_file(mp2.string(), "base_dir=/elsewhere\nc.csv,S01,Color,Visible,Red,1\n");
    const auto m2 = parse_manifest(mp2);
    CHECK(m2.entries[0].path == std::filesystem::path("/elsewhere") / "c.csv");

    const auto bad_label = dir / "bad_label.txt";
    bwc::write_file(bad_label.string(), "a.csv,S01,Color,Visible,Forward,1\n");
    CHECK_THROWS_AS(parse_manifest(bad_label), MalformedRow);

    const auto bad_key = dir / "bad_key.txt";
    bwc::write_file(bad_key.string(), "unknown_key=1\n");
    CHECK_THROWS_AS(parse_manifest(bad_key), MalformedRow);

    CHECK_THROWS_AS(parse_manifest(dir / "nope.txt"), MissingFile);
}

TEST_CASE("full protocol session accounting matches the recording plan", "[prepare]") {
    // 6 subjects x 5 sessions x (2 categories x 2 modes) x 2 labels x 25 s
    const int subjects = 6;
    const int sessions = 5;
    const int sub_sessions_per_session = 2 * 2 * 2;
    const int seconds_per_sub_session = 25;
    const int total_sub_sessions = subjects * sessions * sub_sessions_per_session;
    const int total_seconds = total_sub_sessions * seconds_per_sub_session;
    CHECK(total_sub_sessions == 240);
    CHECK(total_seconds == 6000);
    CHECK(total_seconds / 60 == 100);  // minutes
}
