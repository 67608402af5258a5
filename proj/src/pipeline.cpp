#include "trajml/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "trajml/error.hpp"
#include "trajml/random.hpp"
#include "trajml/report.hpp"

namespace trajml {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    int sources = 0;
    if (!trajectory_paths.empty()) ++sources;
    if (!dataset_path.empty()) ++sources;
    if (synth) ++sources;
    if (sources != 1)
        throw data_error("exactly one data source required (trajectories, dataset CSV, or synth)");
    for (const auto& p : trajectory_paths)
        if (!fs::exists(p)) throw io_error("trajectory file not found: " + p);
    if (!dataset_path.empty() && !fs::exists(dataset_path))
        throw io_error("dataset file not found: " + dataset_path);
    if (warmstart && !fs::exists(warmstart_kb_path))
        throw io_error("knowledge base not found: " + warmstart_kb_path);
    if (budget.max_evaluations == 0) throw budget_error("budget of 0 evaluations");
}

LabeledDataset load_run_dataset(const RunConfig& rc) {
    if (!rc.trajectory_paths.empty()) {
        LabeledDataset all;
        for (const auto& path : rc.trajectory_paths) {
            TrajectoryRecording rec = load_trajectory_csv(path);
            if (!rec.has_labels())
                throw data_error("trajectory file has no label column: " + path);
            LabeledDataset ds = window_featurize(rec, rc.window);
            if (all.rows == 0) {
                all = std::move(ds);
            } else {
                all.features.insert(all.features.end(), ds.features.begin(), ds.features.end());
                all.labels.insert(all.labels.end(), ds.labels.begin(), ds.labels.end());
                all.rows += ds.rows;
            }
        }
        return all;
    }
    if (!rc.dataset_path.empty()) return load_dataset_csv(rc.dataset_path);
    return synth_generate(*rc.synth, rc.seed).train;
}

namespace {

struct DirLock {
    fs::path path;
    explicit DirLock(const fs::path& dir) : path(dir / ".trajml.lock") {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (fs::exists(path))
            throw io_error("output directory is locked by another run: " + path.string());
        std::ofstream(path) << "lock\n";
    }
    ~DirLock() {
        std::error_code ec;
        fs::remove(path, ec);
    }
};

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw io_error("cannot write " + p.string());
    out << text;
}

}  // namespace

FitArtifacts run_fit(const RunConfig& rc) {
    rc.validate();
    LabeledDataset full = load_run_dataset(rc);
    full.validate();

    // dedicated ensemble-selection slice, disjoint from the CV folds
    auto [cash_idx, holdout_idx] = stratified_holdout(full, rc.holdout_fraction,
                                                      mix_seed(rc.seed, 0x401d));
    LabeledDataset cash_part = full.select_rows(cash_idx);
    LabeledDataset holdout = full.select_rows(holdout_idx);

    // optional meta-learning warmstart
    std::vector<Configuration> warmstart_cfgs;
    const ConfigSpace space = default_config_space();
    if (rc.warmstart) {
        KnowledgeBase kb = KnowledgeBase::load(rc.warmstart_kb_path, space);
        warmstart_cfgs = warmstart_select(kb, compute_meta_features(cash_part),
                                          rc.warmstart_k_datasets);
    }

    BudgetSpec budget = rc.budget;
    budget.seed = rc.seed;
    CashResult cash = run_cash(cash_part, space, budget, warmstart_cfgs, rc.metric, rc.top_m);

    // candidate pool with precomputed held-out probabilities
    std::map<std::string, double> loss_by_config;
    for (const auto& rec : cash.trace) {
        if (rec.status != EvalStatus::Complete) continue;
        const std::string key = rec.config.to_json().dump();
        auto it = loss_by_config.find(key);
        if (it == loss_by_config.end() || rec.mean_loss < it->second)
            loss_by_config[key] = rec.mean_loss;
    }
    std::vector<Candidate> candidates;
    for (auto& model : cash.candidates) {
        Candidate c;
        c.holdout_proba = predict_proba(*model.model, holdout);
        c.cv_loss = loss_by_config.at(model.config.to_json().dump());
        c.model = std::move(model);
        candidates.push_back(std::move(c));
    }

    EnsembleModel ens = greedy_select(candidates, holdout.labels, full.num_classes(),
                                      rc.ensemble_rounds, rc.metric);
    auto contrib = contribution_table(ens, candidates, holdout.labels, full.num_classes(),
                                      rc.metric);

    auto holdout_pred = ensemble_predict_label(ens, holdout);
    auto report = classification_report(confusion(holdout.labels, holdout_pred,
                                                  full.num_classes()));

    // bundle with a 10-row probe slice for load-time self-verification
    ModelBundle bundle;
    bundle.space_hash = space.version_hash();
    bundle.ensemble = ens;
    bundle.class_names = full.class_names;
    bundle.feature_names =
        full.feature_names.empty() ? window_feature_names() : full.feature_names;
    bundle.window = rc.window;

    const std::size_t probe_n = std::min<std::size_t>(10, holdout.rows);
    bundle.probe_rows = probe_n;
    bundle.probe_features.assign(holdout.features.begin(),
                                 holdout.features.begin() +
                                     static_cast<std::ptrdiff_t>(probe_n * holdout.cols));
    auto probe_proba =
        ensemble_predict_proba(ens, bundle.probe_features.data(), probe_n, holdout.cols);
    bundle.probe_predictions = argmax_labels(probe_proba, probe_n, full.num_classes());

    nlohmann::ordered_json summary;
    auto digest = nlohmann::ordered_json::array();
    for (const auto& rec : cash.trace) digest.push_back(rec.to_json(/*include_wall_time=*/false));
    summary["trace"] = std::move(digest);
    summary["incumbent"] = cash.incumbent.to_json();
    summary["incumbent_loss"] = cash.incumbent_loss;
    auto contrib_json = nlohmann::ordered_json::array();
    for (const auto& row : contrib) {
        contrib_json.push_back({{"classifier", row.classifier},
                                {"ensemble_weight", row.ensemble_weight},
                                {"cost", row.cost},
                                {"balancing_strategy", row.balancing_strategy},
                                {"validation_score", row.validation_score}});
    }
    summary["contribution_table"] = std::move(contrib_json);
    summary["holdout_report"] = report_json(report, full.class_names);
    summary["metric"] = to_string(rc.metric);
    summary["seed"] = rc.seed;
    bundle.training_summary = std::move(summary);

    if (!rc.out_dir.empty()) {
        DirLock lock{fs::path(rc.out_dir)};
        const fs::path dir(rc.out_dir);
        bundle.save((dir / "bundle.json").string());
        write_trace_jsonl(cash.trace, (dir / "trace.jsonl").string());
        write_text(dir / "contribution.csv", contribution_table_csv(contrib));
        write_text(dir / "report.json", report_json(report, full.class_names).dump(2) + "\n");
        write_text(dir / "report.txt", report_text(report, full.class_names));
    }

    FitArtifacts artifacts;
    artifacts.bundle = std::move(bundle);
    artifacts.trace = std::move(cash.trace);
    artifacts.contribution = std::move(contrib);
    artifacts.holdout_report = report;
    return artifacts;
}

}  // namespace trajml
