#pragma once

// Plain-text persistence for trained models, training logs, and the model
// comparison report.  Every format is line oriented, written with shortest
// round-trip double formatting, and has a strict parser, so that
// save -> load -> save reproduces the bytes exactly.

#include <charconv>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bwc/model/pipeline.hpp"
#include "bwc/text.hpp"

namespace bwc::model {

struct ArtifactError : std::runtime_error {
    explicit ArtifactError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

using bwc::FieldMap;
using bwc::join_doubles;

inline std::string ops_to_text(const std::vector<gp::Op>& ops) {
    std::string out;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i) out += ',';
        out += gp::to_string(ops[i]);
    }
    return out;
}

inline std::vector<gp::Op> parse_ops(std::string_view s) {
    std::vector<gp::Op> ops;
    for (const auto tok : split(s, ',')) ops.push_back(gp::parse_op(trim(tok)));
    return ops;
}

inline void append_kernels(std::string& out, const std::vector<conv::Kernel>& kernels) {
    for (std::size_t i = 0; i < kernels.size(); ++i)
        out += "kernel." + std::to_string(i) + "=" + join_doubles(kernels[i].weights) + "\n";
}

inline std::vector<conv::Kernel> take_kernels(FieldMap& f, std::int64_t count,
                                              std::int64_t size) {
    std::vector<conv::Kernel> kernels;
    for (std::int64_t i = 0; i < count; ++i) {
        conv::Kernel k;
        k.id = static_cast<int>(i);
        k.weights = f.take_doubles("kernel." + std::to_string(i));
        if (static_cast<std::int64_t>(k.weights.size()) != size)
            throw ArtifactError("kernel." + std::to_string(i) + " has wrong length");
        kernels.push_back(std::move(k));
    }
    return kernels;
}

}  // namespace detail

// ---- model artifacts ----

inline std::string to_text(const HybridModel& m) {
    std::string out;
    out += "model=hybrid\n";
    out += "positive_label=" + eeg::to_string(m.labels.positive) + "\n";
    out += "negative_label=" + eeg::to_string(m.labels.negative) + "\n";
    out += "seed=" + std::to_string(m.seed) + "\n";
    out += "per_row_vote=" + std::string(m.per_row_vote ? "1" : "0") + "\n";
    out += "kernel_count=" + std::to_string(m.kernels.size()) + "\n";
    out += "kernel_size=" + std::to_string(m.kernels.empty() ? 0 : m.kernels[0].weights.size()) +
           "\n";
    detail::append_kernels(out, m.kernels);
    out += "train_mse=" + fmt_double(m.train_mse) + "\n";
    out += "alps.n_layers=" + std::to_string(m.alps.n_layers) + "\n";
    out += "alps.layer_capacity=" + std::to_string(m.alps.layer_capacity) + "\n";
    out += "alps.age_gap=" + std::to_string(m.alps.age_gap) + "\n";
    out += "alps.mutation_probability=" + fmt_double(m.alps.mutation_probability) + "\n";
    out += "alps.max_generations=" + std::to_string(m.alps.max_generations) + "\n";
    out += "alps.tournament_k=" + std::to_string(m.alps.tournament_k) + "\n";
    out += "alps.max_depth=" + std::to_string(m.alps.max_depth) + "\n";
    out += "alps.n_features=" + std::to_string(m.alps.n_features) + "\n";
    out += "alps.ops=" + detail::ops_to_text(m.alps.ops) + "\n";
    out += "expression=" + m.expression.to_text() + "\n";
    return out;
}

inline std::string to_text(const StandardModel& m) {
    std::string out;
    out += "model=standard\n";
    out += "positive_label=" + eeg::to_string(m.labels.positive) + "\n";
    out += "negative_label=" + eeg::to_string(m.labels.negative) + "\n";
    out += "seed=" + std::to_string(m.seed) + "\n";
    out += "input_length=" + std::to_string(m.net.input_len) + "\n";
    out += "kernel_count=" + std::to_string(m.net.kernel_count) + "\n";
    out += "kernel_size=" + std::to_string(m.net.kernel_size) + "\n";
    out += "pool_size=" + std::to_string(m.net.pool_size) + "\n";
    out += "pool_stride=" + std::to_string(m.net.pool_stride) + "\n";
    detail::append_kernels(out, m.net.kernels);
    out += "dense.0=" + detail::join_doubles(m.net.dense_w[0]) + "\n";
    out += "dense.1=" + detail::join_doubles(m.net.dense_w[1]) + "\n";
    out += "bias=" + fmt_double(m.net.bias[0]) + " " + fmt_double(m.net.bias[1]) + "\n";
    out += "train_loss=" + fmt_double(m.train_loss) + "\n";
    out += "train.learning_rate=" + fmt_double(m.config.learning_rate) + "\n";
    out += "train.epochs=" + std::to_string(m.config.epochs) + "\n";
    out += "train.train_kernels=" + std::string(m.config.train_kernels ? "1" : "0") + "\n";
    return out;
}

using ModelArtifact = std::variant<HybridModel, StandardModel>;

inline ModelArtifact parse_model_text(std::string_view text) {
    detail::FieldMap f(text);
    const std::string kind = f.take("model");

    const auto pos = eeg::parse_class_label(f.take("positive_label"));
    const auto neg = eeg::parse_class_label(f.take("negative_label"));
    const LabelPair labels{pos, neg};

    if (kind == "hybrid") {
        HybridModel m;
        m.labels = labels;
        m.seed = f.take_seed("seed");
        m.per_row_vote = f.take_flag("per_row_vote");
        const auto kc = f.take_int("kernel_count");
        const auto ks = f.take_int("kernel_size");
        m.kernels = detail::take_kernels(f, kc, ks);
        m.train_mse = f.take_double("train_mse");
        m.alps.n_layers = static_cast<int>(f.take_int("alps.n_layers"));
        m.alps.layer_capacity = static_cast<int>(f.take_int("alps.layer_capacity"));
        m.alps.age_gap = static_cast<int>(f.take_int("alps.age_gap"));
        m.alps.mutation_probability = f.take_double("alps.mutation_probability");
        m.alps.max_generations = static_cast<int>(f.take_int("alps.max_generations"));
        m.alps.tournament_k = static_cast<int>(f.take_int("alps.tournament_k"));
        m.alps.max_depth = static_cast<int>(f.take_int("alps.max_depth"));
        m.alps.n_features = static_cast<int>(f.take_int("alps.n_features"));
        m.alps.ops = detail::parse_ops(f.take("alps.ops"));
        m.expression = gp::parse_expression(f.take("expression"));
        f.finish();
        return m;
    }
    if (kind == "standard") {
        StandardModel m;
        m.labels = labels;
        m.seed = f.take_seed("seed");
        m.net.input_len = static_cast<std::size_t>(f.take_int("input_length"));
        m.net.kernel_count = static_cast<std::size_t>(f.take_int("kernel_count"));
        m.net.kernel_size = static_cast<std::size_t>(f.take_int("kernel_size"));
        m.net.pool_size = static_cast<std::size_t>(f.take_int("pool_size"));
        m.net.pool_stride = static_cast<std::size_t>(f.take_int("pool_stride"));
        m.net.kernels = detail::take_kernels(f, static_cast<std::int64_t>(m.net.kernel_count),
                                             static_cast<std::int64_t>(m.net.kernel_size));
        m.net.dense_w.resize(2);
        m.net.dense_w[0] = f.take_doubles("dense.0");
        m.net.dense_w[1] = f.take_doubles("dense.1");
        const auto bias = f.take_doubles("bias");
        if (bias.size() != 2) throw ArtifactError("bias must hold two values");
        m.net.bias = {bias[0], bias[1]};
        if (m.net.dense_w[0].size() != m.net.feature_len() ||
            m.net.dense_w[1].size() != m.net.feature_len())
            throw ArtifactError("dense weight rows do not match the flattened feature length");
        m.train_loss = f.take_double("train_loss");
        m.config.learning_rate = f.take_double("train.learning_rate");
        m.config.epochs = static_cast<int>(f.take_int("train.epochs"));
        m.config.train_kernels = f.take_flag("train.train_kernels");
        m.config.seed = m.seed;
        f.finish();
        return m;
    }
    throw ArtifactError("unknown model kind '" + kind + "'");
}

inline void save_model(const std::string& path, const ModelArtifact& m) {
    std::visit([&](const auto& mm) { write_file(path, to_text(mm)); }, m);
}

inline ModelArtifact load_model(const std::string& path) {
    return parse_model_text(read_file(path));
}

// ---- training logs ----

inline std::string alps_log_csv(const std::vector<gp::GenerationStats>& history) {
    std::string out = "generation,best_mse,mean_mse,layer0_refresh\n";
    for (const auto& row : history) {
        out += std::to_string(row.generation) + "," + fmt_double(row.best_mse) + "," +
               fmt_double(row.mean_mse) + "," + (row.layer0_refresh ? "1" : "0") + "\n";
    }
    return out;
}

inline std::vector<gp::GenerationStats> parse_alps_log_csv(std::string_view text) {
    const auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "generation,best_mse,mean_mse,layer0_refresh")
        throw ArtifactError("bad ALPS log header");
    std::vector<gp::GenerationStats> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 4) throw ArtifactError("bad ALPS log row: " + std::string(line));
        gp::GenerationStats row;
        row.generation = static_cast<int>(parse_int(cells[0]).value());
        row.best_mse = parse_double(cells[1]).value();
        row.mean_mse = parse_double(cells[2]).value();
        row.layer0_refresh = cells[3] == "1";
        out.push_back(row);
    }
    return out;
}

inline std::string cnn_log_csv(const std::vector<cnn::TrainLogEntry>& log) {
    std::string out = "epoch,loss\n";
    for (const auto& row : log)
        out += std::to_string(row.epoch) + "," + fmt_double(row.loss) + "\n";
    return out;
}

inline std::vector<cnn::TrainLogEntry> parse_cnn_log_csv(std::string_view text) {
    const auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "epoch,loss")
        throw ArtifactError("bad training log header");
    std::vector<cnn::TrainLogEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 2) throw ArtifactError("bad training log row: " + std::string(line));
        out.push_back({static_cast<int>(parse_int(cells[0]).value()),
                       parse_double(cells[1]).value()});
    }
    return out;
}

// ---- comparison report ----

struct ComparisonEntry {
    std::string name;  // e.g. "hybrid", "standard"
    metrics::EvaluationReport report;
    double test_mse = 0.0;

    bool operator==(const ComparisonEntry&) const = default;
};

inline std::string comparison_csv(const std::vector<ComparisonEntry>& entries) {
    std::string out =
        "model,positive_label,negative_label,tp,fp,fn,tn,"
        "accuracy,precision,recall,f_measure,test_mse\n";
    for (const auto& e : entries) {
        const auto& r = e.report;
        out += e.name + "," + r.positive_label + "," + r.negative_label + "," +
               std::to_string(r.windows.tp) + "," + std::to_string(r.windows.fp) + "," +
               std::to_string(r.windows.fn) + "," + std::to_string(r.windows.tn) + "," +
               fmt_double(r.accuracy) + "," + fmt_double(r.precision) + "," +
               fmt_double(r.recall) + "," + fmt_double(r.f_measure) + "," +
               fmt_double(e.test_mse) + "\n";
    }
    return out;
}

inline std::vector<ComparisonEntry> parse_comparison_csv(std::string_view text) {
    const auto lines = split(text, '\n');
    if (lines.empty() ||
        trim(lines[0]) != "model,positive_label,negative_label,tp,fp,fn,tn,"
                          "accuracy,precision,recall,f_measure,test_mse")
        throw ArtifactError("bad comparison header");
    std::vector<ComparisonEntry> out;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = trim(lines[i]);
        if (line.empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 12) throw ArtifactError("bad comparison row: " + std::string(line));
        ComparisonEntry e;
        e.name = std::string(cells[0]);
        e.report.positive_label = std::string(cells[1]);
        e.report.negative_label = std::string(cells[2]);
        e.report.windows.tp = parse_int(cells[3]).value();
        e.report.windows.fp = parse_int(cells[4]).value();
        e.report.windows.fn = parse_int(cells[5]).value();
        e.report.windows.tn = parse_int(cells[6]).value();
        e.report.accuracy = parse_double(cells[7]).value();
        e.report.precision = parse_double(cells[8]).value();
        e.report.recall = parse_double(cells[9]).value();
        e.report.f_measure = parse_double(cells[10]).value();
        e.test_mse = parse_double(cells[11]).value();
        out.push_back(std::move(e));
    }
    return out;
}

inline std::string comparison_text(const std::vector<ComparisonEntry>& entries) {
    std::string out = "model comparison\n";
    for (const auto& e : entries) {
        const auto& r = e.report;
        out += "\n[" + e.name + "]\n";
        out += "labels=" + r.positive_label + "/" + r.negative_label + "\n";
        out += "window_matrix=tp:" + std::to_string(r.windows.tp) +
               " fp:" + std::to_string(r.windows.fp) + " fn:" + std::to_string(r.windows.fn) +
               " tn:" + std::to_string(r.windows.tn) + "\n";
        out += "accuracy=" + metrics::fmt_fixed(r.accuracy, 2) + "\n";
        out += "precision=" + metrics::fmt_fixed(r.precision, 2) + "\n";
        out += "recall=" + metrics::fmt_fixed(r.recall, 2) + "\n";
        out += "f_measure=" + metrics::fmt_fixed(r.f_measure, 3) + "\n";
        out += "test_mse=" + fmt_double(e.test_mse) + "\n";
    }
    if (!entries.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < entries.size(); ++i)
            if (entries[i].report.accuracy > entries[best].report.accuracy) best = i;
        out += "\nbest_accuracy=" + entries[best].name + "\n";
    }
    return out;
}

}  // namespace bwc::model
