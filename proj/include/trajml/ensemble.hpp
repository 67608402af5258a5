#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajml/cash.hpp"
#include "trajml/learners.hpp"

namespace trajml {

struct EnsembleModel {
    std::vector<TrainedModel> members;
    std::vector<double> weights;  // nonnegative, sum to 1
    double validation_loss = 1.0;

    std::size_t num_classes() const { return members.empty() ? 0 : members[0].class_count; }
};

struct ContributionRow {
    std::string classifier;   // algorithm name + candidate id
    double ensemble_weight = 0;
    double cost = 0;          // candidate mean CV loss
    std::string balancing_strategy;
    double validation_score = 0;  // 1 - member's own held-out loss
};

struct Candidate {
    TrainedModel model;
    std::vector<double> holdout_proba;  // precomputed on the common held-out set
    double cv_loss = 1.0;               // from the CASH trace
};

// Greedy selection with replacement: starts at the best single candidate,
// then for `rounds` iterations adds the candidate minimizing the held-out
// metric of the running weighted average. Weights are selection frequencies.
EnsembleModel greedy_select(const std::vector<Candidate>& candidates,
                            const std::vector<int>& y_valid, std::size_t num_classes,
                            std::size_t rounds, Metric metric);

std::vector<double> ensemble_predict_proba(const EnsembleModel& ens, const double* x,
                                           std::size_t rows, std::size_t cols);
std::vector<double> ensemble_predict_proba(const EnsembleModel& ens, const LabeledDataset& ds);
std::vector<int> ensemble_predict_label(const EnsembleModel& ens, const LabeledDataset& ds);

std::size_t ensemble_size_bytes(const EnsembleModel& ens);

// One row per member, sorted by descending weight. The candidate pool is
// needed to recover each member's CV cost and held-out score.
std::vector<ContributionRow> contribution_table(const EnsembleModel& ens,
                                                const std::vector<Candidate>& candidates,
                                                const std::vector<int>& y_valid,
                                                std::size_t num_classes, Metric metric);

std::string contribution_table_csv(const std::vector<ContributionRow>& rows);
std::string contribution_table_text(const std::vector<ContributionRow>& rows);

}  // namespace trajml
