#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajml/config_space.hpp"
#include "trajml/learners.hpp"
#include "trajml/split.hpp"
#include "trajml/surrogate.hpp"

namespace trajml {

enum class Metric { BalancedAccuracy, MacroF1, LogLoss };

std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

enum class EvalStatus { Complete, Discarded, Failed };

std::string to_string(EvalStatus s);

struct EvaluationRecord {
    Configuration config;
    std::vector<double> fold_losses;  // possibly partial when discarded
    double mean_loss = 1.0;           // mean of present fold losses
    EvalStatus status = EvalStatus::Complete;
    double wall_time_s = 0.0;

    nlohmann::ordered_json to_json(bool include_wall_time = true) const;
};

struct BudgetSpec {
    std::size_t max_evaluations = 50;
    double max_wall_time_s = 1e9;
    double per_eval_time_limit_s = 1e9;
    std::size_t k_folds = 5;
    std::uint64_t seed = 0;
};

// Validation loss of one trained model under the chosen metric
// (1 - balanced accuracy, 1 - macro F1, or mean weighted cross entropy).
double validation_loss(const Classifier& model, const LabeledDataset& valid, Metric metric,
                       const ClassWeights* weights = nullptr);

// Mean K-fold CV loss of one configuration. Balancing is applied inside each
// training fold only. When `incumbent_loss` is set, folds stop early once
// the running mean is hopeless (see early_discard). Any fold failure yields
// status Failed with loss 1.0.
EvaluationRecord cash_objective(const Configuration& cfg, const LabeledDataset& ds,
                                const std::vector<FoldIndices>& folds, Metric metric,
                                std::optional<double> incumbent_loss = std::nullopt,
                                double discard_margin = 0.05,
                                double time_limit_s = 1e9);

// True iff the mean of observed fold losses is at least incumbent + margin.
// Never discards without an incumbent.
bool early_discard(const std::vector<double>& observed_losses,
                   std::optional<double> incumbent_loss, double margin = 0.05);

// Minimization expected improvement with z = (best - mu) / sigma:
// EI = (best - mu) * Phi(z) + sigma * phi(z); max(best - mu, 0) when sigma=0.
double expected_improvement(double mu, double sigma, double best_loss);

struct SurrogateState {
    std::vector<std::vector<double>> design;  // encoded configs
    std::vector<double> losses;
    RegressionForest forest;
    std::optional<Configuration> incumbent;
    double incumbent_loss = 1e300;
    std::size_t proposals_made = 0;

    void observe(const ConfigSpace& space, const EvaluationRecord& rec);
    void refit(std::uint64_t seed);
};

// Interleaved proposal rule: random while cold (< 8 observations) and on
// every 3rd call; otherwise argmax-EI over 1000 random candidates plus 100
// incumbent mutations.
Configuration propose_next(SurrogateState& state, const ConfigSpace& space, std::uint64_t seed);

struct CashResult {
    std::vector<EvaluationRecord> trace;
    Configuration incumbent;
    double incumbent_loss = 1.0;
    std::vector<TrainedModel> candidates;  // top-M complete configs, refit on the full split
};

// Generic objective signature so benchmarks can substitute a synthetic
// response surface for real fold evaluation.
using ObjectiveFn = std::function<EvaluationRecord(const Configuration&, std::uint64_t seed,
                                                   std::optional<double> incumbent_loss)>;

CashResult run_cash_with_objective(const ConfigSpace& space, const ObjectiveFn& objective,
                                   const BudgetSpec& budget,
                                   const std::vector<Configuration>& warmstart = {});

// Full CASH loop on a dataset: stratified folds, warmstart evaluations,
// propose/evaluate/update until the budget is exhausted, then the best
// `top_m` complete configurations are refit on the whole split.
CashResult run_cash(const LabeledDataset& ds, const ConfigSpace& space, const BudgetSpec& budget,
                    const std::vector<Configuration>& warmstart = {},
                    Metric metric = Metric::BalancedAccuracy, std::size_t top_m = 50);

void write_trace_jsonl(const std::vector<EvaluationRecord>& trace, const std::string& path);

}  // namespace trajml
