// bwc — command line front end for the brainwave classification pipeline.
//
// Subcommands:
//   synth    generate synthetic sub-session CSVs plus a manifest
//   prepare  turn sub-session CSVs (per manifest) into labeled window CSVs
//   train    train the hybrid or standard model on a window CSV
//   compare  evaluate two model artifacts side by side on a test window CSV
//
// Exit codes: 0 success, 1 runtime failure, 2 usage/config error.
// Input validation errors (missing files, malformed rows, bad config keys,
// incompatible artifacts) count as usage errors; failures during computation
// or output count as runtime failures.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bwc/bwc.hpp"

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Reads a user-supplied input file; a missing path is a usage error.
std::string read_input_file(const std::string& path) {
    if (!fs::exists(path)) throw bwc::eeg::MissingFile(path);
    return bwc::read_file(path);
}

// Writes `files.txt`, the manifest of produced files, into the run directory.
void write_files_manifest(const fs::path& out_dir, std::vector<std::string> names) {
    std::sort(names.begin(), names.end());
    std::string listing;
    for (const auto& n : names) listing += n + "\n";
    bwc::write_file((out_dir / "files.txt").string(), listing);
}

std::string session_file_name(const bwc::eeg::SubSessionMeta& meta) {
    return meta.subject_id + "_" + bwc::eeg::to_string(meta.category) + "_" +
           bwc::eeg::to_string(meta.mode) + "_" + bwc::eeg::to_string(meta.label) + "_" +
           std::to_string(meta.session_index) + ".csv";
}

// ---- synth ----

struct SynthOptions {
    std::string spec_path;
    std::string out_dir;
    std::uint64_t seed = 0;
};

int cmd_synth(const SynthOptions& opt) {
    const auto spec = bwc::eeg::parse_synth_spec(read_input_file(opt.spec_path));
    const auto sessions = bwc::eeg::generate_synthetic_dataset(spec, opt.seed);

    fs::create_directories(opt.out_dir);
    const fs::path out(opt.out_dir);
    std::vector<std::string> produced;
    std::string manifest;
    for (const auto& s : sessions) {
        const std::string name = session_file_name(s.meta());
        bwc::eeg::write_subsession_csv(out / name, s);
        manifest += name + "," + s.meta().subject_id + "," + bwc::eeg::to_string(s.meta().category) +
                    "," + bwc::eeg::to_string(s.meta().mode) + "," +
                    bwc::eeg::to_string(s.meta().label) + "," +
                    std::to_string(s.meta().session_index) + "\n";
        produced.push_back(name);
    }
    bwc::write_file((out / "manifest.txt").string(), manifest);
    produced.push_back("manifest.txt");
    write_files_manifest(out, produced);

    std::cout << "synth: wrote " << sessions.size() << " sub-sessions to " << opt.out_dir << "\n";
    return 0;
}

// ---- prepare ----

struct PrepareOptions {
    std::string manifest_path;
    std::string out_dir;
    std::uint64_t seed = 0;
};

int cmd_prepare(const PrepareOptions& opt) {
    const auto manifest = bwc::eeg::parse_manifest(opt.manifest_path);
    if (manifest.entries.empty()) throw UsageError("manifest lists no sub-sessions");

    // Group windows per (category, mode), keeping manifest order inside a group.
    std::map<std::string, std::vector<bwc::eeg::Window>> groups;
    for (const auto& e : manifest.entries) {
        const auto session = bwc::eeg::parse_subsession_csv(e.path, e.meta);
        const std::string key = bwc::eeg::to_string(e.meta.category) + "_" +
                                bwc::eeg::to_string(e.meta.mode);
        groups[key].push_back(bwc::eeg::build_window(session));
    }

    fs::create_directories(opt.out_dir);
    const fs::path out(opt.out_dir);
    std::vector<std::string> produced;
    for (const auto& [key, windows] : groups) {
        const std::string name = key + "_windows.csv";
        bwc::eeg::write_windows_csv(out / name, windows);
        produced.push_back(name);
        const std::size_t lines = 1 + windows.size() * bwc::eeg::kWindowSamples;
        std::cout << "prepare: " << name << ": " << windows.size() << " windows, " << lines
                  << " lines\n";
    }
    write_files_manifest(out, produced);
    std::cout << "prepare: seed=" << opt.seed << " groups=" << groups.size() << "\n";
    return 0;
}

// ---- train ----

struct TrainOptions {
    std::string data;
    std::string model;
    std::string out_dir;
    std::string config_path;
    std::string split = "80/20";
    std::uint64_t seed = 0;
    bool seed_set = false;

    // hybrid hyperparameters
    int generations = 300;
    int population = 300;  // total across layers; layer capacity = population / layers
    int layers = 5;
    int age_gap = 10;
    double mutation = 0.18;
    int tournament = 3;
    int max_depth = 8;
    bool per_row_vote = false;

    // shared front end
    int kernels = 3;
    int kernel_size = 10;

    // standard hyperparameters
    double lr = 0.005;
    int epochs = 2000;
    bool train_kernels = true;
};

// Applies config-file values for keys whose flag was not given on the command
// line; rejects unknown keys.
void apply_config_file(TrainOptions& opt, const CLI::App& cmd) {
    bwc::FieldMap f(read_input_file(opt.config_path));
    const auto flag_absent = [&](const std::string& flag) { return cmd.count(flag) == 0; };

    const auto take_str = [&](const char* key, const std::string& flag, std::string& dst) {
        if (f.has(key)) { auto v = f.take(key); if (flag_absent(flag)) dst = v; }
    };
    const auto take_int = [&](const char* key, const std::string& flag, int& dst) {
        if (f.has(key)) { auto v = f.take_int(key); if (flag_absent(flag)) dst = static_cast<int>(v); }
    };
    const auto take_double = [&](const char* key, const std::string& flag, double& dst) {
        if (f.has(key)) { auto v = f.take_double(key); if (flag_absent(flag)) dst = v; }
    };
    const auto take_flag = [&](const char* key, const std::string& flag, bool& dst) {
        if (f.has(key)) { auto v = f.take_flag(key); if (flag_absent(flag)) dst = v; }
    };

    take_str("data", "--data", opt.data);
    take_str("model", "--model", opt.model);
    take_str("out", "--out", opt.out_dir);
    take_str("split", "--split", opt.split);
    if (f.has("seed")) {
        auto v = f.take_seed("seed");
        if (flag_absent("--seed")) { opt.seed = v; opt.seed_set = true; }
    }
    take_int("generations", "--generations", opt.generations);
    take_int("population", "--population", opt.population);
    take_int("layers", "--layers", opt.layers);
    take_int("age_gap", "--age-gap", opt.age_gap);
    take_double("mutation", "--mutation", opt.mutation);
    take_int("tournament", "--tournament", opt.tournament);
    take_int("max_depth", "--max-depth", opt.max_depth);
    take_flag("per_row_vote", "--per-row-vote", opt.per_row_vote);
    take_int("kernels", "--kernels", opt.kernels);
    take_int("kernel_size", "--kernel-size", opt.kernel_size);
    take_double("lr", "--lr", opt.lr);
    take_int("epochs", "--epochs", opt.epochs);
    take_flag("train_kernels", "--train-kernels", opt.train_kernels);
    f.finish();
}

int cmd_train(TrainOptions& opt, const CLI::App& cmd) {
    if (!opt.config_path.empty()) apply_config_file(opt, cmd);
    if (cmd.count("--seed") > 0) opt.seed_set = true;

    if (opt.data.empty()) throw UsageError("--data is required (flag or config)");
    if (opt.model.empty()) throw UsageError("--model is required (flag or config)");
    if (opt.out_dir.empty()) throw UsageError("--out is required (flag or config)");
    if (!opt.seed_set) throw UsageError("--seed is required: reproducibility is mandatory");

    const bool hybrid = opt.model == "proposed" || opt.model == "hybrid";
    if (!hybrid && opt.model != "standard")
        throw UsageError("--model must be proposed|hybrid|standard, got '" + opt.model + "'");

    bwc::eeg::SplitRatio ratio;
    try {
        ratio = bwc::eeg::parse_split_ratio(opt.split);
    } catch (const std::runtime_error& e) {
        throw UsageError(e.what());
    }
    const auto windows = bwc::eeg::read_windows_csv(opt.data);
    const auto labels = bwc::model::infer_label_pair(windows);
    const auto split = bwc::eeg::split_train_test(windows, ratio, opt.seed);

    fs::create_directories(opt.out_dir);
    const fs::path out(opt.out_dir);
    std::vector<std::string> produced;

    std::string artifact_text;
    std::string log_csv;
    bwc::metrics::EvaluationReport report;
    double test_mse = 0.0;

    if (hybrid) {
        if (opt.layers < 1) throw UsageError("--layers must be >= 1");
        if (opt.population % opt.layers != 0)
            throw UsageError("--population must be divisible by --layers");
        bwc::model::HybridConfig cfg;
        cfg.alps.n_layers = opt.layers;
        cfg.alps.layer_capacity = opt.population / opt.layers;
        cfg.alps.age_gap = opt.age_gap;
        cfg.alps.mutation_probability = opt.mutation;
        cfg.alps.max_generations = opt.generations;
        cfg.alps.tournament_k = opt.tournament;
        cfg.alps.max_depth = opt.max_depth;
        cfg.per_row_vote = opt.per_row_vote;
        cfg.kernel_count = opt.kernels;
        cfg.kernel_size = opt.kernel_size;

        auto trained = bwc::model::train_hybrid(split.train, labels, cfg, opt.seed);
        artifact_text = bwc::model::to_text(trained.model);
        log_csv = bwc::model::alps_log_csv(trained.history);
        report = bwc::model::evaluate(trained.model, split.test);
        test_mse = bwc::model::hybrid_test_mse(trained.model, split.test);
    } else {
        bwc::cnn::TrainConfig cfg;
        cfg.learning_rate = opt.lr;
        cfg.epochs = opt.epochs;
        cfg.seed = opt.seed;
        cfg.train_kernels = opt.train_kernels;

        auto trained = bwc::model::train_standard(split.train, labels, cfg, opt.seed,
                                                  opt.kernels, opt.kernel_size);
        artifact_text = bwc::model::to_text(trained.model);
        log_csv = bwc::model::cnn_log_csv(trained.log);
        report = bwc::model::evaluate(trained.model, split.test);
        test_mse = bwc::model::standard_test_mse(trained.model, split.test);
    }

    bwc::write_file((out / "artifact.txt").string(), artifact_text);
    bwc::write_file((out / "train_log.csv").string(), log_csv);
    bwc::write_file((out / "eval_report.txt").string(), bwc::metrics::to_text(report));
    bwc::write_file((out / "eval_report.csv").string(), bwc::metrics::to_csv(report));
    bwc::eeg::write_windows_csv(out / "test_windows.csv", split.test);
    produced = {"artifact.txt", "train_log.csv", "eval_report.txt", "eval_report.csv",
                "test_windows.csv"};
    write_files_manifest(out, produced);

    std::cout << "train: model=" << (hybrid ? "hybrid" : "standard") << " windows="
              << windows.size() << " train=" << split.train.size() << " test="
              << split.test.size() << "\n";
    std::cout << "train: test_accuracy=" << bwc::metrics::fmt_fixed(report.accuracy, 2)
              << " test_mse=" << bwc::fmt_double(test_mse) << "\n";
    return 0;
}

// ---- compare ----

struct CompareOptions {
    std::string artifact_a;
    std::string artifact_b;
    std::string test_path;
    std::string out_dir;
};

bwc::model::ComparisonEntry evaluate_artifact(const bwc::model::ModelArtifact& artifact,
                                              const std::vector<bwc::eeg::Window>& test) {
    bwc::model::ComparisonEntry e;
    if (const auto* h = std::get_if<bwc::model::HybridModel>(&artifact)) {
        e.name = "hybrid";
        e.report = bwc::model::evaluate(*h, test);
        e.test_mse = bwc::model::hybrid_test_mse(*h, test);
    } else {
        const auto& s = std::get<bwc::model::StandardModel>(artifact);
        e.name = "standard";
        e.report = bwc::model::evaluate(s, test);
        e.test_mse = bwc::model::standard_test_mse(s, test);
    }
    return e;
}

int cmd_compare(const CompareOptions& opt) {
    const auto a = bwc::model::parse_model_text(read_input_file(opt.artifact_a));
    const auto b = bwc::model::parse_model_text(read_input_file(opt.artifact_b));
    const auto test = bwc::eeg::read_windows_csv(opt.test_path);

    const auto labels_of = [](const bwc::model::ModelArtifact& m) {
        return std::visit([](const auto& mm) { return mm.labels; }, m);
    };
    bwc::model::check_test_compatibility(labels_of(a), labels_of(b), test);

    const std::vector<bwc::model::ComparisonEntry> entries = {evaluate_artifact(a, test),
                                                              evaluate_artifact(b, test)};
    const std::string text = bwc::model::comparison_text(entries);

    if (!opt.out_dir.empty()) {
        fs::create_directories(opt.out_dir);
        const fs::path out(opt.out_dir);
        bwc::write_file((out / "comparison.txt").string(), text);
        bwc::write_file((out / "comparison.csv").string(),
                        bwc::model::comparison_csv(entries));
        write_files_manifest(out, {"comparison.txt", "comparison.csv"});
    }
    std::cout << text;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bwc — brainwave window classification toolkit"};
    app.require_subcommand(1);

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "Generate synthetic sub-session CSVs");
    synth->add_option("--spec", synth_opt.spec_path, "Synthesis spec file (key=value)")
        ->required();
    synth->add_option("--seed", synth_opt.seed, "Root random seed")->required();
    synth->add_option("--out", synth_opt.out_dir, "Output directory")->required();

    PrepareOptions prep_opt;
    auto* prepare = app.add_subcommand("prepare", "Assemble labeled windows from raw CSVs");
    prepare->add_option("--manifest", prep_opt.manifest_path, "Sub-session manifest file")
        ->required();
    prepare->add_option("--seed", prep_opt.seed, "Root random seed (recorded; preparation is deterministic)")
        ->required();
    prepare->add_option("--out", prep_opt.out_dir, "Output directory")->required();

    TrainOptions train_opt;
    auto* train = app.add_subcommand("train", "Train a model on a window CSV");
    train->add_option("--data", train_opt.data, "Prepared window CSV");
    train->add_option("--model", train_opt.model, "proposed|hybrid|standard");
    train->add_option("--out", train_opt.out_dir, "Output directory");
    train->add_option("--seed", train_opt.seed, "Root random seed");
    train->add_option("--config", train_opt.config_path,
                      "key=value config file; flags override file values");
    train->add_option("--split", train_opt.split, "Train/test ratio: 70/30, 75/25 or 80/20");
    train->add_option("--generations", train_opt.generations, "Evolution generations (hybrid)");
    train->add_option("--population", train_opt.population,
                      "Total population size across layers (hybrid)");
    train->add_option("--layers", train_opt.layers, "Number of age layers (hybrid)");
    train->add_option("--age-gap", train_opt.age_gap, "ALPS age gap (hybrid)");
    train->add_option("--mutation", train_opt.mutation, "Mutation probability (hybrid)");
    train->add_option("--tournament", train_opt.tournament, "Tournament size (hybrid)");
    train->add_option("--max-depth", train_opt.max_depth, "Expression depth limit (hybrid)");
    train->add_flag("--per-row-vote,!--no-per-row-vote", train_opt.per_row_vote,
                    "Score each DWT row separately and take a majority vote (hybrid)");
    train->add_option("--kernels", train_opt.kernels, "Convolution kernel count");
    train->add_option("--kernel-size", train_opt.kernel_size, "Convolution kernel width");
    train->add_option("--lr", train_opt.lr, "Learning rate (standard)");
    train->add_option("--epochs", train_opt.epochs, "Training epochs (standard)");
    train->add_flag("--train-kernels,!--freeze-kernels", train_opt.train_kernels,
                    "Also train convolution kernels (standard)");

    CompareOptions cmp_opt;
    auto* compare = app.add_subcommand("compare", "Evaluate two artifacts on one test set");
    compare->add_option("--a", cmp_opt.artifact_a, "First model artifact")->required();
    compare->add_option("--b", cmp_opt.artifact_b, "Second model artifact")->required();
    compare->add_option("--test", cmp_opt.test_path, "Test window CSV")->required();
    compare->add_option("--out", cmp_opt.out_dir, "Optional output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // prints help, exit 0
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the error message
        return 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(synth_opt);
        if (prepare->parsed()) return cmd_prepare(prep_opt);
        if (train->parsed()) return cmd_train(train_opt, *train);
        if (compare->parsed()) return cmd_compare(cmp_opt);
        return 2;  // unreachable with require_subcommand(1)
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bwc::FieldError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bwc::eeg::MissingFile& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bwc::eeg::MalformedRow& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bwc::eeg::EmptySession& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bwc::eeg::InvalidSpec& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bwc::model::ArtifactError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bwc::model::IncompatibleTestSet& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
