#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trajml/dataset.hpp"

namespace trajml {

struct FoldIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> valid;
};

// Stratified K-fold: per-class counts across folds differ by at most one.
// Throws E_DATA naming the offending class when some class has fewer than
// k_folds samples. Deterministic for a fixed seed.
std::vector<FoldIndices> stratified_kfold(const LabeledDataset& ds, std::size_t k_folds,
                                          std::uint64_t seed);

// Single stratified split; `holdout_fraction` of each class (at least one
// sample per class when the class has >= 2) goes to the second half.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_holdout(const LabeledDataset& ds, double holdout_fraction, std::uint64_t seed);

}  // namespace trajml
