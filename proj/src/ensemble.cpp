#include "trajml/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <sstream>

#include "trajml/error.hpp"
#include "trajml/report.hpp"

namespace trajml {

namespace {

double holdout_loss(std::span<const double> proba, const std::vector<int>& y,
                    std::size_t num_classes, Metric metric) {
    if (metric == Metric::LogLoss)
        return test_loss_proba(y, proba, num_classes);
    auto pred = argmax_labels(proba, y.size(), num_classes);
    auto cm = confusion(y, pred, num_classes);
    if (metric == Metric::BalancedAccuracy) return 1.0 - balanced_accuracy(cm);
    return 1.0 - macro_f1_score(cm);
}

}  // namespace

EnsembleModel greedy_select(const std::vector<Candidate>& candidates,
                            const std::vector<int>& y_valid, std::size_t num_classes,
                            std::size_t rounds, Metric metric) {
    if (candidates.empty()) throw data_error("greedy ensemble selection needs >= 1 candidate");
    const std::size_t m = y_valid.size();
    for (const auto& c : candidates)
        if (c.holdout_proba.size() != m * num_classes)
            throw contract_error("candidate probability matrix shape mismatch");

    // seed with the single best candidate
    std::size_t best0 = 0;
    double best0_loss = 1e300;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const double l = holdout_loss(candidates[i].holdout_proba, y_valid, num_classes, metric);
        if (l < best0_loss) {
            best0_loss = l;
            best0 = i;
        }
    }

    std::vector<std::size_t> selection_count(candidates.size(), 0);
    selection_count[best0] = 1;
    std::size_t total_selected = 1;
    std::vector<double> running(candidates[best0].holdout_proba);  // sum of selected probas

    // the returned ensemble is the best prefix of the selection sequence, so
    // it can never be worse than the single-candidate initialization
    std::vector<std::size_t> best_counts = selection_count;
    std::size_t best_total = 1;
    double best_ever_loss = best0_loss;

    std::vector<double> trial(m * num_classes);
    for (std::size_t round = 0; round < rounds; ++round) {
        std::size_t best_i = 0;
        double best_loss = 1e300;
        const double inv = 1.0 / static_cast<double>(total_selected + 1);
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const auto& p = candidates[i].holdout_proba;
            for (std::size_t k = 0; k < trial.size(); ++k) trial[k] = (running[k] + p[k]) * inv;
            const double l = holdout_loss(trial, y_valid, num_classes, metric);
            if (l < best_loss) {  // strict: ties keep the lower candidate index
                best_loss = l;
                best_i = i;
            }
        }
        ++selection_count[best_i];
        ++total_selected;
        const auto& p = candidates[best_i].holdout_proba;
        for (std::size_t k = 0; k < running.size(); ++k) running[k] += p[k];
        if (best_loss < best_ever_loss) {
            best_ever_loss = best_loss;
            best_counts = selection_count;
            best_total = total_selected;
        }
    }

    EnsembleModel ens;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (best_counts[i] == 0) continue;
        ens.members.push_back(candidates[i].model);
        ens.weights.push_back(static_cast<double>(best_counts[i]) /
                              static_cast<double>(best_total));
    }
    ens.validation_loss = best_ever_loss;
    return ens;
}

std::vector<double> ensemble_predict_proba(const EnsembleModel& ens, const double* x,
                                           std::size_t rows, std::size_t cols) {
    if (ens.members.empty()) throw data_error("empty ensemble");
    const std::size_t C = ens.num_classes();
    for (const auto& member : ens.members) {
        if (member.class_count != C || member.model->num_features() != cols)
            throw data_error("ensemble member shape mismatch");
    }
    std::vector<double> out(rows * C, 0.0);
    for (std::size_t k = 0; k < ens.members.size(); ++k) {
        if (ens.weights[k] == 0.0) continue;
        auto p = predict_proba(*ens.members[k].model, x, rows, cols);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += ens.weights[k] * p[i];
    }
    return out;
}

std::vector<double> ensemble_predict_proba(const EnsembleModel& ens, const LabeledDataset& ds) {
    return ensemble_predict_proba(ens, ds.features.data(), ds.rows, ds.cols);
}

std::vector<int> ensemble_predict_label(const EnsembleModel& ens, const LabeledDataset& ds) {
    auto proba = ensemble_predict_proba(ens, ds);
    return argmax_labels(proba, ds.rows, ens.num_classes());
}

std::size_t ensemble_size_bytes(const EnsembleModel& ens) {
    std::size_t total = 0;
    for (const auto& member : ens.members) total += member.size_bytes;
    return total;
}

std::vector<ContributionRow> contribution_table(const EnsembleModel& ens,
                                                const std::vector<Candidate>& candidates,
                                                const std::vector<int>& y_valid,
                                                std::size_t num_classes, Metric metric) {
    std::vector<ContributionRow> rows;
    for (std::size_t k = 0; k < ens.members.size(); ++k) {
        const auto& member = ens.members[k];
        // trace the member back to its candidate by configuration
        const Candidate* source = nullptr;
        std::size_t source_idx = 0;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            if (candidates[i].model.config == member.config) {
                source = &candidates[i];
                source_idx = i;
                break;
            }
        }
        if (!source) throw data_error("ensemble member not traceable to a candidate");

        ContributionRow row;
        row.classifier = to_string(member.algorithm) + " (model " + std::to_string(source_idx + 1) + ")";
        row.ensemble_weight = ens.weights[k];
        row.cost = source->cv_loss;
        row.balancing_strategy = member.config.get_cat("balancing");
        row.validation_score =
            1.0 - holdout_loss(source->holdout_proba, y_valid, num_classes, metric);
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.ensemble_weight > b.ensemble_weight;
    });
    return rows;
}

std::string contribution_table_csv(const std::vector<ContributionRow>& rows) {
    std::ostringstream out;
    out << "classifier,ensemble_weight,cost,balancing_strategy,validation_score\n";
    out << std::setprecision(6);
    for (const auto& r : rows)
        out << r.classifier << ',' << r.ensemble_weight << ',' << r.cost << ','
            << r.balancing_strategy << ',' << r.validation_score << '\n';
    return out.str();
}

std::string contribution_table_text(const std::vector<ContributionRow>& rows) {
    std::size_t width = 10;
    for (const auto& r : rows) width = std::max(width, r.classifier.size());
    std::ostringstream out;
    out << std::left << std::setw(4) << "No." << std::setw(static_cast<int>(width) + 2)
        << "Classifier" << std::right << std::setw(16) << "Ensemble Weight" << std::setw(10)
        << "Cost" << std::setw(20) << "Balancing Strategy" << std::setw(18)
        << "Validation Score" << '\n';
    out << std::fixed << std::setprecision(4);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out << std::left << std::setw(4) << i + 1 << std::setw(static_cast<int>(width) + 2)
            << r.classifier << std::right << std::setw(16) << r.ensemble_weight << std::setw(10)
            << r.cost << std::setw(20) << r.balancing_strategy << std::setw(18)
            << r.validation_score << '\n';
    }
    return out.str();
}

}  // namespace trajml
