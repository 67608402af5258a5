// trajml: AutoML for windowed trajectory action classification.
//
// Subcommands: fit, predict, evaluate, benchmark, synth, meta-build.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "trajml/error.hpp"
#include "trajml/pipeline.hpp"

namespace fs = std::filesystem;
using namespace trajml;

namespace {

std::string sniff_header(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open input file: " + path);
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

bool is_trajectory_header(const std::string& header) {
    return header.rfind("frame,x,y,z", 0) == 0;
}

// Feature CSV rows, label column optional (ignored when present).
std::pair<std::vector<double>, std::size_t> load_feature_rows(const std::string& path,
                                                              std::size_t expected_cols) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open input file: " + path);
    std::string line;
    std::getline(in, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header;
    {
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) header.push_back(f);
    }
    const bool has_label = !header.empty() && header.back() == "label";
    const std::size_t d = header.size() - (has_label ? 1 : 0);
    if (d != expected_cols) {
        std::string expect = "f0..f" + std::to_string(expected_cols - 1) + "[,label]";
        throw schema_error("input has " + std::to_string(d) + " feature columns, expected " +
                           std::to_string(expected_cols) + " (" + expect + ")");
    }
    std::vector<double> rows;
    std::size_t n = 0, line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string f;
        std::size_t col = 0;
        while (std::getline(ss, f, ',')) {
            if (col < d) {
                try {
                    rows.push_back(std::stod(f));
                } catch (...) {
                    throw parse_error("line " + std::to_string(line_no) + ": bad numeric field");
                }
            }
            ++col;
        }
        if (col != header.size())
            throw parse_error("line " + std::to_string(line_no) + ": wrong field count");
        ++n;
    }
    return {std::move(rows), n};
}

// Inputs for predict/benchmark: a raw trajectory is auto-windowed with the
// bundle's window spec; a feature CSV is used directly.
std::pair<std::vector<double>, std::size_t> load_prediction_input(const std::string& path,
                                                                  const ModelBundle& bundle) {
    const std::string header = sniff_header(path);
    if (is_trajectory_header(header)) {
        TrajectoryRecording rec = load_trajectory_csv(path);
        if (rec.size() < bundle.window.window_len)
            throw data_error("trajectory shorter than the model's window length (" +
                             std::to_string(bundle.window.window_len) + " frames)");
        LabeledDataset ds = window_featurize(rec, bundle.window);
        return {std::move(ds.features), ds.rows};
    }
    return load_feature_rows(path, bundle.feature_names.size());
}

SynthSpec parse_synth_profile(const std::string& profile, const std::string& custom_counts) {
    SynthSpec spec;
    if (profile == "paper_like") {
        spec.profile = SynthProfile::PaperLike;
    } else if (profile == "balanced") {
        spec.profile = SynthProfile::Balanced;
    } else if (profile == "custom") {
        spec.profile = SynthProfile::Custom;
        std::stringstream ss(custom_counts);
        std::string f;
        while (std::getline(ss, f, ','))
            spec.custom_counts.push_back(static_cast<std::size_t>(std::stoull(f)));
    } else {
        throw data_error("unknown synth profile '" + profile + "'");
    }
    return spec;
}

void load_run_config_file(const std::string& path, RunConfig& rc) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("config file is not valid JSON: ") + e.what());
    }
    if (j.contains("trajectories"))
        rc.trajectory_paths = j["trajectories"].get<std::vector<std::string>>();
    if (j.contains("dataset")) rc.dataset_path = j["dataset"].get<std::string>();
    if (j.contains("synth_profile"))
        rc.synth = parse_synth_profile(j["synth_profile"].get<std::string>(), "");
    if (j.contains("window_len")) rc.window.window_len = j["window_len"].get<std::size_t>();
    if (j.contains("stride")) rc.window.stride = j["stride"].get<std::size_t>();
    if (j.contains("budget_evals")) rc.budget.max_evaluations = j["budget_evals"].get<std::size_t>();
    if (j.contains("budget_seconds")) rc.budget.max_wall_time_s = j["budget_seconds"].get<double>();
    if (j.contains("kfolds")) rc.budget.k_folds = j["kfolds"].get<std::size_t>();
    if (j.contains("metric")) rc.metric = metric_from_string(j["metric"].get<std::string>());
    if (j.contains("warmstart_kb")) {
        rc.warmstart_kb_path = j["warmstart_kb"].get<std::string>();
        rc.warmstart = !rc.warmstart_kb_path.empty();
    }
    if (j.contains("k_datasets")) rc.warmstart_k_datasets = j["k_datasets"].get<std::size_t>();
    if (j.contains("ensemble_rounds")) rc.ensemble_rounds = j["ensemble_rounds"].get<std::size_t>();
    if (j.contains("out")) rc.out_dir = j["out"].get<std::string>();
    if (j.contains("seed")) rc.seed = j["seed"].get<std::uint64_t>();
}

int run(int argc, char** argv) {
    CLI::App app{"AutoML engine for surgical suturing action classification from tool trajectories"};
    app.require_subcommand(1);

    // ---- fit ----
    auto* fit_cmd = app.add_subcommand("fit", "Run the full AutoML pipeline and write a model bundle");
    std::string config_file, synth_profile, custom_counts, data_csv, kb_path, out_dir, metric_str;
    std::vector<std::string> trajectories;
    std::uint64_t seed = 0;
    std::size_t budget_evals = 50, kfolds = 5, ensemble_rounds = 50, k_datasets = 3;
    double budget_seconds = 1e9, eval_time_limit = 1e9;
    std::size_t window_len = 25, stride = 5;
    fit_cmd->add_option("--config", config_file, "JSON config file (flags override it)");
    fit_cmd->add_option("--synth", synth_profile, "Synthetic data profile: paper_like|balanced|custom");
    fit_cmd->add_option("--custom-counts", custom_counts, "Comma-separated per-class counts for --synth custom");
    fit_cmd->add_option("--data", data_csv, "Feature dataset CSV (f0..fN,label)");
    fit_cmd->add_option("--trajectory", trajectories, "Labeled trajectory CSV (repeatable)");
    fit_cmd->add_option("--window-len", window_len, "Window length in frames");
    fit_cmd->add_option("--stride", stride, "Window stride in frames");
    fit_cmd->add_option("--seed", seed, "Master RNG seed");
    fit_cmd->add_option("--metric", metric_str, "balanced_accuracy|macro_f1|log_loss");
    fit_cmd->add_option("--budget-evals", budget_evals, "Max configuration evaluations");
    fit_cmd->add_option("--budget-seconds", budget_seconds, "Max optimization wall time");
    fit_cmd->add_option("--eval-time-limit", eval_time_limit, "Per-evaluation time limit (s)");
    fit_cmd->add_option("--kfolds", kfolds, "Cross-validation folds");
    fit_cmd->add_option("--warmstart-kb", kb_path, "Knowledge base JSON for meta-learning warmstart");
    fit_cmd->add_option("--k-datasets", k_datasets, "Warmstart donor datasets");
    fit_cmd->add_option("--ensemble-rounds", ensemble_rounds, "Greedy ensemble selection rounds");
    fit_cmd->add_option("--out", out_dir, "Output directory")->required();

    // ---- predict ----
    auto* predict_cmd = app.add_subcommand("predict", "Predict classes for a trajectory or feature CSV");
    std::string bundle_path, input_path, output_path;
    predict_cmd->add_option("--bundle", bundle_path, "Model bundle JSON")->required();
    predict_cmd->add_option("--input", input_path, "Input CSV (trajectory or features)")->required();
    predict_cmd->add_option("--out", output_path, "Output CSV (default stdout)");

    // ---- evaluate ----
    auto* eval_cmd = app.add_subcommand("evaluate", "Evaluate a bundle on a labeled feature CSV");
    std::string eval_bundle, eval_data, eval_out;
    eval_cmd->add_option("--bundle", eval_bundle, "Model bundle JSON")->required();
    eval_cmd->add_option("--data", eval_data, "Labeled feature CSV")->required();
    eval_cmd->add_option("--out", eval_out, "Output directory")->required();

    // ---- benchmark ----
    auto* bench_cmd = app.add_subcommand("benchmark", "Size/speed/accuracy sweep over ensemble truncations");
    std::string bench_bundle, bench_data, bench_out;
    std::size_t repetitions = 5;
    bench_cmd->add_option("--bundle", bench_bundle, "Model bundle JSON")->required();
    bench_cmd->add_option("--data", bench_data, "Labeled feature CSV")->required();
    bench_cmd->add_option("--repetitions", repetitions, "Timed repetitions per point (>= 3)");
    bench_cmd->add_option("--out", bench_out, "Output CSV (default stdout)");

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic train/test dataset pair");
    std::string synth_prof = "paper_like", synth_counts, synth_train_out, synth_test_out;
    std::uint64_t synth_seed = 0;
    synth_cmd->add_option("--profile", synth_prof, "paper_like|balanced|custom");
    synth_cmd->add_option("--custom-counts", synth_counts, "Comma-separated per-class counts");
    synth_cmd->add_option("--seed", synth_seed, "RNG seed");
    synth_cmd->add_option("--out-train", synth_train_out, "Train CSV path")->required();
    synth_cmd->add_option("--out-test", synth_test_out, "Test CSV path")->required();

    // ---- meta-build ----
    auto* meta_cmd = app.add_subcommand("meta-build", "Build a warmstart knowledge base from datasets");
    std::string meta_list, meta_out, meta_metric = "balanced_accuracy";
    std::vector<std::string> meta_datasets;
    std::size_t meta_budget = 20, meta_kfolds = 5;
    std::uint64_t meta_seed = 0;
    bool meta_partial = false;
    meta_cmd->add_option("--datasets", meta_list, "File listing dataset CSV paths, one per line");
    meta_cmd->add_option("--dataset", meta_datasets, "Dataset CSV path (repeatable)");
    meta_cmd->add_option("--budget-evals", meta_budget, "Evaluations per dataset");
    meta_cmd->add_option("--kfolds", meta_kfolds, "Cross-validation folds");
    meta_cmd->add_option("--metric", meta_metric, "balanced_accuracy|macro_f1|log_loss");
    meta_cmd->add_option("--seed", meta_seed, "RNG seed");
    meta_cmd->add_flag("--allow-partial", meta_partial, "Write a partial KB when some datasets fail");
    meta_cmd->add_option("--out", meta_out, "Knowledge base output path")->required();

    CLI11_PARSE(app, argc, argv);

    if (fit_cmd->parsed()) {
        RunConfig rc;
        if (!config_file.empty()) load_run_config_file(config_file, rc);
        if (fit_cmd->count("--synth")) rc.synth = parse_synth_profile(synth_profile, custom_counts);
        if (fit_cmd->count("--data")) rc.dataset_path = data_csv;
        if (fit_cmd->count("--trajectory")) rc.trajectory_paths = trajectories;
        if (fit_cmd->count("--window-len")) rc.window.window_len = window_len;
        if (fit_cmd->count("--stride")) rc.window.stride = stride;
        if (fit_cmd->count("--seed")) rc.seed = seed;
        if (fit_cmd->count("--metric")) rc.metric = metric_from_string(metric_str);
        if (fit_cmd->count("--budget-evals")) rc.budget.max_evaluations = budget_evals;
        if (fit_cmd->count("--budget-seconds")) rc.budget.max_wall_time_s = budget_seconds;
        if (fit_cmd->count("--eval-time-limit")) rc.budget.per_eval_time_limit_s = eval_time_limit;
        if (fit_cmd->count("--kfolds")) rc.budget.k_folds = kfolds;
        if (fit_cmd->count("--warmstart-kb")) {
            rc.warmstart_kb_path = kb_path;
            rc.warmstart = true;
        }
        if (fit_cmd->count("--k-datasets")) rc.warmstart_k_datasets = k_datasets;
        if (fit_cmd->count("--ensemble-rounds")) rc.ensemble_rounds = ensemble_rounds;
        rc.out_dir = out_dir;

        FitArtifacts artifacts = run_fit(rc);
        std::cout << "fit complete: " << artifacts.bundle.ensemble.members.size()
                  << " ensemble members, holdout accuracy "
                  << artifacts.holdout_report.accuracy << "\n"
                  << "artifacts written to " << rc.out_dir << "\n";
        return 0;
    }

    if (predict_cmd->parsed()) {
        ModelBundle bundle = ModelBundle::load(bundle_path, default_config_space());
        auto [rows, n] = load_prediction_input(input_path, bundle);
        const std::size_t d = bundle.feature_names.size();
        const std::size_t C = bundle.class_names.size();
        auto proba = n > 0 ? ensemble_predict_proba(bundle.ensemble, rows.data(), n, d)
                           : std::vector<double>{};
        auto labels = argmax_labels(proba, n, C);

        std::ostringstream out;
        out << "predicted_class";
        for (const auto& name : bundle.class_names) out << ",p_" << name;
        out << '\n';
        out.precision(6);
        for (std::size_t i = 0; i < n; ++i) {
            out << bundle.class_names[static_cast<std::size_t>(labels[i])];
            for (std::size_t c = 0; c < C; ++c) out << ',' << proba[i * C + c];
            out << '\n';
        }
        if (output_path.empty()) {
            std::cout << out.str();
        } else {
            std::ofstream f(output_path);
            if (!f) throw io_error("cannot write " + output_path);
            f << out.str();
        }
        return 0;
    }

    if (eval_cmd->parsed()) {
        ModelBundle bundle = ModelBundle::load(eval_bundle, default_config_space());
        LabeledDataset ds = load_dataset_csv(eval_data);
        if (ds.rows == 0) throw data_error("empty test file: " + eval_data);
        // remap test labels onto the bundle vocabulary
        std::vector<int> remap(ds.class_names.size(), -1);
        for (std::size_t c = 0; c < ds.class_names.size(); ++c) {
            for (std::size_t b = 0; b < bundle.class_names.size(); ++b)
                if (ds.class_names[c] == bundle.class_names[b]) remap[c] = static_cast<int>(b);
            if (remap[c] < 0)
                throw vocab_error("test label '" + ds.class_names[c] +
                                  "' not in the model's class vocabulary");
        }
        std::vector<int> y_true;
        y_true.reserve(ds.rows);
        for (int y : ds.labels) y_true.push_back(remap[static_cast<std::size_t>(y)]);

        auto proba = ensemble_predict_proba(bundle.ensemble, ds.features.data(), ds.rows, ds.cols);
        auto pred = argmax_labels(proba, ds.rows, bundle.class_names.size());
        auto cm = confusion(y_true, pred, bundle.class_names.size());
        auto report = classification_report(cm);

        fs::create_directories(eval_out);
        const fs::path dir(eval_out);
        {
            std::ofstream f(dir / "report.json");
            f << report_json(report, bundle.class_names).dump(2) << '\n';
        }
        {
            std::ofstream f(dir / "report.txt");
            f << report_text(report, bundle.class_names);
        }
        {
            std::ofstream f(dir / "confusion.csv");
            f << confusion_csv(cm, bundle.class_names);
        }
        std::cout << report_text(report, bundle.class_names);
        return 0;
    }

    if (bench_cmd->parsed()) {
        ModelBundle bundle = ModelBundle::load(bench_bundle, default_config_space());
        LabeledDataset ds = load_dataset_csv(bench_data);
        std::vector<int> y_true;
        {
            std::vector<int> remap(ds.class_names.size(), -1);
            for (std::size_t c = 0; c < ds.class_names.size(); ++c)
                for (std::size_t b = 0; b < bundle.class_names.size(); ++b)
                    if (ds.class_names[c] == bundle.class_names[b]) remap[c] = static_cast<int>(b);
            for (int y : ds.labels) {
                if (remap[static_cast<std::size_t>(y)] < 0)
                    throw vocab_error("test label not in the model's class vocabulary");
                y_true.push_back(remap[static_cast<std::size_t>(y)]);
            }
        }

        // truncation sweep: members sorted by descending weight, top-k each
        std::vector<std::size_t> order(bundle.ensemble.members.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return bundle.ensemble.weights[a] > bundle.ensemble.weights[b];
        });

        std::ostringstream csv;
        csv << "members,size_bytes,preds_per_sec,accuracy\n";
        for (std::size_t k = 1; k <= order.size(); ++k) {
            EnsembleModel sub;
            double wsum = 0;
            for (std::size_t i = 0; i < k; ++i) wsum += bundle.ensemble.weights[order[i]];
            for (std::size_t i = 0; i < k; ++i) {
                sub.members.push_back(bundle.ensemble.members[order[i]]);
                sub.weights.push_back(bundle.ensemble.weights[order[i]] / wsum);
            }
            auto pred_fn = [&] { return ensemble_predict_label(sub, ds); };
            auto pred = pred_fn();
            const double acc =
                1.0 - test_loss_labels(y_true, pred);
            BenchmarkResult res = throughput_benchmark(pred_fn, ds.rows, repetitions,
                                                       ensemble_size_bytes(sub), acc);
            csv << k << ',' << res.model_size_bytes << ',' << res.predictions_per_second << ','
                << res.accuracy << '\n';
        }
        if (bench_out.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream f(bench_out);
            if (!f) throw io_error("cannot write " + bench_out);
            f << csv.str();
        }
        return 0;
    }

    if (synth_cmd->parsed()) {
        SynthSpec spec = parse_synth_profile(synth_prof, synth_counts);
        SynthResult result = synth_generate(spec, synth_seed);
        save_dataset_csv(result.train, synth_train_out);
        save_dataset_csv(result.test, synth_test_out);
        std::cout << "train: " << result.train.rows << " rows, test: " << result.test.rows
                  << " rows\n";
        return 0;
    }

    if (meta_cmd->parsed()) {
        std::vector<std::string> paths = meta_datasets;
        if (!meta_list.empty()) {
            std::ifstream in(meta_list);
            if (!in) throw io_error("cannot open dataset list: " + meta_list);
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty() && line.back() == '\r') line.pop_back();
                if (!line.empty()) paths.push_back(line);
            }
        }
        if (paths.empty()) throw data_error("no datasets given (--datasets or --dataset)");

        const ConfigSpace space = default_config_space();
        BudgetSpec budget;
        budget.max_evaluations = meta_budget;
        budget.k_folds = meta_kfolds;
        budget.seed = meta_seed;

        KnowledgeBase kb;
        kb.space_hash = space.version_hash();
        std::size_t failed = 0;
        for (const auto& path : paths) {
            try {
                LabeledDataset ds = load_dataset_csv(path);
                KnowledgeBase one = build_knowledge_base({{path, ds}}, space, budget,
                                                         metric_from_string(meta_metric));
                kb.entries.push_back(std::move(one.entries[0]));
            } catch (const Error& e) {
                if (!meta_partial) throw;
                std::cerr << "skipping " << path << ": " << e.what() << '\n';
                ++failed;
            }
        }
        if (kb.entries.empty()) throw data_error("all datasets failed; nothing to write");
        kb.recompute_normalization();
        kb.save(meta_out);
        std::cout << "knowledge base with " << kb.entries.size() << " entries written to "
                  << meta_out << (failed ? " (" + std::to_string(failed) + " skipped)" : "")
                  << '\n';
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "E_INTERNAL: " << e.what() << '\n';
        return 3;
    }
}
