#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trajml/dataset.hpp"

namespace trajml {

struct ClassWeights {
    std::vector<double> w;  // one positive weight per class
};

enum class BalancingKind { None, Weighting, Smote, Undersample };

std::string to_string(BalancingKind k);
BalancingKind balancing_from_string(const std::string& s);

struct BalancingStrategy {
    BalancingKind kind = BalancingKind::None;
    int smote_k = 5;
    double target_ratio = 1.0;  // undersample majority to ratio * target count
    // Opt-in fallback for 1-sample classes: duplicate with small jitter
    // instead of erroring.
    bool allow_degenerate_jitter = false;
};

// w_i = N / (C * N_i). Throws E_DATA when any class count is zero.
ClassWeights class_weights(const ClassDistribution& dist);

// Single-term weighted cross entropy for a one-hot true label:
// L = -w_i * log(max(p_i, 1e-12)). `predicted` must be a probability
// simplex within 1e-9 or E_CONTRACT is thrown.
double weighted_cross_entropy(const ClassWeights& weights, int true_label,
                              std::span<const double> predicted);

// Raises every class count to the majority count via k-NN interpolation
// between same-class originals. Original rows are preserved and come first.
LabeledDataset smote_oversample(const LabeledDataset& ds, int k, std::uint64_t seed,
                                bool allow_degenerate_jitter = false);

// Reduces each class to min(own count, ceil(target_ratio * minority count))
// by seeded sampling without replacement.
LabeledDataset random_undersample(const LabeledDataset& ds, double target_ratio,
                                  std::uint64_t seed);

// Applies a strategy to a training split (never to validation data).
LabeledDataset apply_balancing(const LabeledDataset& ds, const BalancingStrategy& strategy,
                               std::uint64_t seed);

}  // namespace trajml
