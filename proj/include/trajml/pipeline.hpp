#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "trajml/bundle.hpp"
#include "trajml/cash.hpp"
#include "trajml/metalearn.hpp"
#include "trajml/report.hpp"
#include "trajml/synth.hpp"

namespace trajml {

// Orchestration parameters for a full fit run (data prep -> optional
// warmstart -> CASH -> greedy ensemble -> reports).
struct RunConfig {
    // Exactly one data source: trajectory CSVs, a feature CSV, or a synth profile.
    std::vector<std::string> trajectory_paths;
    std::string dataset_path;
    std::optional<SynthSpec> synth;

    WindowSpec window;
    BudgetSpec budget;
    Metric metric = Metric::BalancedAccuracy;

    bool warmstart = false;
    std::string warmstart_kb_path;
    std::size_t warmstart_k_datasets = 3;

    std::size_t ensemble_rounds = 50;
    double holdout_fraction = 0.2;  // ensemble-selection slice, disjoint from CV folds
    std::size_t top_m = 50;

    std::string out_dir;
    std::uint64_t seed = 0;

    void validate() const;
};

struct FitArtifacts {
    ModelBundle bundle;
    std::vector<EvaluationRecord> trace;
    std::vector<ContributionRow> contribution;
    ClassificationReport holdout_report;
};

// Runs the whole pipeline; when run_config.out_dir is nonempty, writes
// bundle.json, trace.jsonl, contribution.csv, report.json and report.txt.
FitArtifacts run_fit(const RunConfig& run_config);

// Loads the training dataset named by the run config (synth profiles return
// the train half).
LabeledDataset load_run_dataset(const RunConfig& run_config);

}  // namespace trajml
