#include "trajml/cash.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include "trajml/error.hpp"
#include "trajml/random.hpp"
#include "trajml/report.hpp"

namespace trajml {

std::string to_string(Metric m) {
    switch (m) {
        case Metric::BalancedAccuracy: return "balanced_accuracy";
        case Metric::MacroF1: return "macro_f1";
        case Metric::LogLoss: return "log_loss";
    }
    return "balanced_accuracy";
}

Metric metric_from_string(const std::string& s) {
    if (s == "balanced_accuracy") return Metric::BalancedAccuracy;
    if (s == "macro_f1") return Metric::MacroF1;
    if (s == "log_loss") return Metric::LogLoss;
    throw space_error("unknown metric '" + s + "'");
}

std::string to_string(EvalStatus s) {
    switch (s) {
        case EvalStatus::Complete: return "complete";
        case EvalStatus::Discarded: return "discarded";
        case EvalStatus::Failed: return "failed";
    }
    return "complete";
}

nlohmann::ordered_json EvaluationRecord::to_json(bool include_wall_time) const {
    nlohmann::ordered_json j;
    j["config"] = config.to_json();
    j["fold_losses"] = fold_losses;
    j["mean_loss"] = mean_loss;
    j["status"] = to_string(status);
    if (include_wall_time) j["wall_time_s"] = wall_time_s;
    return j;
}

double validation_loss(const Classifier& model, const LabeledDataset& valid, Metric metric,
                       const ClassWeights* weights) {
    if (metric == Metric::LogLoss) {
        auto proba = predict_proba(model, valid);
        ClassWeights unit;
        if (!weights) unit.w.assign(valid.num_classes(), 1.0);
        return test_loss_proba(valid.labels, proba, valid.num_classes(),
                               weights ? weights : &unit);
    }
    auto pred = predict_label(model, valid);
    auto cm = confusion(valid.labels, pred, valid.num_classes());
    if (metric == Metric::BalancedAccuracy) return 1.0 - balanced_accuracy(cm);
    return 1.0 - macro_f1_score(cm);
}

bool early_discard(const std::vector<double>& observed_losses,
                   std::optional<double> incumbent_loss, double margin) {
    if (observed_losses.empty() || !incumbent_loss) return false;
    double mean = 0;
    for (double l : observed_losses) mean += l;
    mean /= static_cast<double>(observed_losses.size());
    return mean >= *incumbent_loss + margin;
}

EvaluationRecord cash_objective(const Configuration& cfg, const LabeledDataset& ds,
                                const std::vector<FoldIndices>& folds, Metric metric,
                                std::optional<double> incumbent_loss, double discard_margin,
                                double time_limit_s) {
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    EvaluationRecord rec;
    rec.config = cfg;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        try {
            LabeledDataset train = ds.select_rows(folds[f].train);
            LabeledDataset valid = ds.select_rows(folds[f].valid);
            TrainedModel model = fit_with_balancing(cfg, train, mix_seed(0xf01d, f));
            rec.fold_losses.push_back(validation_loss(*model.model, valid, metric));
        } catch (const Error&) {
            rec.status = EvalStatus::Failed;
            rec.fold_losses.clear();
            rec.mean_loss = 1.0;
            rec.wall_time_s = elapsed();
            return rec;
        }
        const bool out_of_time = elapsed() > time_limit_s && f + 1 < folds.size();
        if (early_discard(rec.fold_losses, incumbent_loss, discard_margin) || out_of_time) {
            rec.status = EvalStatus::Discarded;
            break;
        }
    }
    double sum = 0;
    for (double l : rec.fold_losses) sum += l;
    rec.mean_loss = rec.fold_losses.empty() ? 1.0 : sum / static_cast<double>(rec.fold_losses.size());
    rec.wall_time_s = elapsed();
    return rec;
}

double expected_improvement(double mu, double sigma, double best_loss) {
    const double improvement = best_loss - mu;
    if (sigma <= 0) return std::max(improvement, 0.0);
    const double z = improvement / sigma;
    const double phi = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
    const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
    return std::max(improvement * cdf + sigma * phi, 0.0);
}

void SurrogateState::observe(const ConfigSpace& space, const EvaluationRecord& rec) {
    design.push_back(space.encode(rec.config));
    // failed runs carry worst-case loss; discarded runs keep their
    // pessimistic partial mean
    losses.push_back(rec.status == EvalStatus::Failed ? 1.0 : rec.mean_loss);
    if (rec.status == EvalStatus::Complete && rec.mean_loss < incumbent_loss) {
        incumbent_loss = rec.mean_loss;
        incumbent = rec.config;
    }
}

void SurrogateState::refit(std::uint64_t seed) {
    RegressionForestParams params;
    forest = RegressionForest::fit(design, losses, params, seed);
}

Configuration propose_next(SurrogateState& state, const ConfigSpace& space, std::uint64_t seed) {
    const std::size_t proposal_index = state.proposals_made++;
    const bool interleave_random = proposal_index % 3 == 2;
    if (state.design.size() < 8 || interleave_random || state.forest.empty() ||
        !state.incumbent)
        return space.sample(mix_seed(seed, 0xabc0 + proposal_index));

    Configuration best_cfg;
    double best_ei = -1.0;
    auto score = [&](const Configuration& cfg) {
        auto [mu, sigma] = state.forest.predict(space.encode(cfg));
        const double ei = expected_improvement(mu, sigma, state.incumbent_loss);
        if (ei > best_ei) {  // strict: ties keep the earlier candidate
            best_ei = ei;
            best_cfg = cfg;
        }
    };
    for (std::size_t i = 0; i < 1000; ++i) score(space.sample(mix_seed(seed, 2 * i)));
    for (std::size_t i = 0; i < 100; ++i)
        score(space.mutate(*state.incumbent, mix_seed(seed, 2 * i + 1)));
    return best_cfg;
}

CashResult run_cash_with_objective(const ConfigSpace& space, const ObjectiveFn& objective,
                                   const BudgetSpec& budget,
                                   const std::vector<Configuration>& warmstart) {
    if (budget.max_evaluations == 0) throw budget_error("budget of 0 evaluations");
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    for (const auto& cfg : warmstart) space.validate(cfg);

    SurrogateState state;
    CashResult result;
    std::size_t evals = 0;
    while (evals < budget.max_evaluations && elapsed() < budget.max_wall_time_s) {
        Configuration cfg;
        if (evals < warmstart.size())
            cfg = warmstart[evals];
        else
            cfg = propose_next(state, space, mix_seed(budget.seed, evals));

        std::optional<double> incumbent;
        if (state.incumbent) incumbent = state.incumbent_loss;
        EvaluationRecord rec = objective(cfg, mix_seed(budget.seed, 0xeeee + evals), incumbent);
        state.observe(space, rec);
        if (state.design.size() >= 4) state.refit(mix_seed(budget.seed, 0x5a5a + evals));
        result.trace.push_back(std::move(rec));
        ++evals;
    }

    if (!state.incumbent) throw data_error("all evaluations failed; no incumbent");
    result.incumbent = *state.incumbent;
    result.incumbent_loss = state.incumbent_loss;
    return result;
}

CashResult run_cash(const LabeledDataset& ds, const ConfigSpace& space, const BudgetSpec& budget,
                    const std::vector<Configuration>& warmstart, Metric metric,
                    std::size_t top_m) {
    auto folds = stratified_kfold(ds, budget.k_folds, budget.seed);
    ObjectiveFn objective = [&](const Configuration& cfg, std::uint64_t seed,
                                std::optional<double> incumbent) {
        (void)seed;
        return cash_objective(cfg, ds, folds, metric, incumbent, 0.05,
                              budget.per_eval_time_limit_s);
    };
    CashResult result = run_cash_with_objective(space, objective, budget, warmstart);

    // refit the best complete configs on the whole training split
    std::vector<std::size_t> complete;
    for (std::size_t i = 0; i < result.trace.size(); ++i)
        if (result.trace[i].status == EvalStatus::Complete) complete.push_back(i);
    std::stable_sort(complete.begin(), complete.end(), [&](std::size_t a, std::size_t b) {
        return result.trace[a].mean_loss < result.trace[b].mean_loss;
    });
    if (complete.size() > top_m) complete.resize(top_m);
    for (std::size_t i : complete) {
        const auto& cfg = result.trace[i].config;
        result.candidates.push_back(fit_with_balancing(cfg, ds, mix_seed(budget.seed, 0x0ef1)));
    }
    return result;
}

void write_trace_jsonl(const std::vector<EvaluationRecord>& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write trace file: " + path);
    for (const auto& rec : trace) out << rec.to_json().dump() << '\n';
}

}  // namespace trajml
