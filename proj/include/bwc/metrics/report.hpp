#pragma once

// Evaluation report: one confusion matrix with its four derived measures,
// serialized as a line-oriented text block plus a machine-readable CSV twin.
// Full-precision values are stored; the display line rounds accuracy,
// precision and recall to 2 decimals and the F-measure to 3.

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bwc/metrics/confusion.hpp"
#include "bwc/text.hpp"

namespace bwc::metrics {

struct EvaluationReport {
    std::string positive_label;
    std::string negative_label;
    ConfusionMatrix windows;  // window-level counts, carries record_scale
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;

    bool operator==(const EvaluationReport&) const = default;
};

inline EvaluationReport report(const ConfusionMatrix& cm, const std::string& positive_label,
                               const std::string& negative_label) {
    if (cm.total() <= 0) throw UndefinedMetric("report");
    EvaluationReport r;
    r.positive_label = positive_label;
    r.negative_label = negative_label;
    r.windows = cm;
    r.accuracy = metrics::accuracy(cm);
    r.precision = metrics::precision(cm);
    r.recall = metrics::recall(cm);
    r.f_measure = metrics::f_measure(cm);
    return r;
}

inline std::string fmt_fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

inline std::string to_text(const EvaluationReport& r) {
    const ConfusionMatrix rec = r.windows.scaled();
    std::ostringstream out;
    out << "report=evaluation\n";
    out << "positive_label=" << r.positive_label << "\n";
    out << "negative_label=" << r.negative_label << "\n";
    out << "window_matrix=" << r.windows.tp << ' ' << r.windows.fp << ' ' << r.windows.fn << ' '
        << r.windows.tn << "\n";
    out << "record_scale=" << r.windows.record_scale << "\n";
    out << "record_matrix=" << rec.tp << ' ' << rec.fp << ' ' << rec.fn << ' ' << rec.tn << "\n";
    out << "accuracy=" << fmt_double(r.accuracy) << "\n";
    out << "precision=" << fmt_double(r.precision) << "\n";
    out << "recall=" << fmt_double(r.recall) << "\n";
    out << "f_measure=" << fmt_double(r.f_measure) << "\n";
    out << "display=" << fmt_fixed(r.accuracy, 2) << ' ' << fmt_fixed(r.precision, 2) << ' '
        << fmt_fixed(r.recall, 2) << ' ' << fmt_fixed(r.f_measure, 3) << "\n";
    return out.str();
}

// CSV twin: single header + single data row.
inline std::string to_csv(const EvaluationReport& r) {
    std::ostringstream out;
    out << "positive_label,negative_label,tp,fp,fn,tn,record_scale,accuracy,precision,recall,f_measure\n";
    out << r.positive_label << ',' << r.negative_label << ',' << r.windows.tp << ','
        << r.windows.fp << ',' << r.windows.fn << ',' << r.windows.tn << ','
        << r.windows.record_scale << ',' << fmt_double(r.accuracy) << ','
        << fmt_double(r.precision) << ',' << fmt_double(r.recall) << ','
        << fmt_double(r.f_measure) << "\n";
    return out.str();
}

inline EvaluationReport report_from_text(const std::string& text) {
    EvaluationReport r;
    std::istringstream in(text);
    std::string line;
    bool have_matrix = false;
    while (std::getline(in, line)) {
        auto kv = parse_key_value(line);
        if (!kv) continue;
        if (kv->key == "report") {
            if (kv->value != "evaluation") throw std::runtime_error("not an evaluation report");
        } else if (kv->key == "positive_label") {
            r.positive_label = kv->value;
        } else if (kv->key == "negative_label") {
            r.negative_label = kv->value;
        } else if (kv->key == "window_matrix") {
            auto parts = split(kv->value, ' ');
            if (parts.size() != 4) throw std::runtime_error("bad window_matrix line");
            r.windows.tp = *parse_int(parts[0]);
            r.windows.fp = *parse_int(parts[1]);
            r.windows.fn = *parse_int(parts[2]);
            r.windows.tn = *parse_int(parts[3]);
            have_matrix = true;
        } else if (kv->key == "record_scale") {
            r.windows.record_scale = *parse_int(kv->value);
        } else if (kv->key == "accuracy") {
            r.accuracy = *parse_double(kv->value);
        } else if (kv->key == "precision") {
            r.precision = *parse_double(kv->value);
        } else if (kv->key == "recall") {
            r.recall = *parse_double(kv->value);
        } else if (kv->key == "f_measure") {
            r.f_measure = *parse_double(kv->value);
        } else if (kv->key == "record_matrix" || kv->key == "display") {
            // derived lines, recomputed on write
        } else {
            throw std::runtime_error("unknown report key: " + kv->key);
        }
    }
    if (!have_matrix) throw std::runtime_error("report has no window_matrix");
    return r;
}

}  // namespace bwc::metrics
