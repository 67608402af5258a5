#include "trajml/split.hpp"

#include <algorithm>
#include <cmath>

#include "trajml/error.hpp"
#include "trajml/random.hpp"

namespace trajml {

namespace {

std::vector<std::vector<std::size_t>> indices_per_class(const LabeledDataset& ds) {
    std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
    for (std::size_t i = 0; i < ds.rows; ++i)
        by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);
    return by_class;
}

}  // namespace

std::vector<FoldIndices> stratified_kfold(const LabeledDataset& ds, std::size_t k_folds,
                                          std::uint64_t seed) {
    if (k_folds < 2) throw data_error("k_folds must be >= 2");
    auto by_class = indices_per_class(ds);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        if (by_class[c].size() < k_folds)
            throw data_error("class '" + ds.class_names[c] + "' has " +
                             std::to_string(by_class[c].size()) + " samples, fewer than k_folds=" +
                             std::to_string(k_folds));
    }

    std::vector<std::vector<std::size_t>> fold_members(k_folds);
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto rng = make_rng(seed, c);
        std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
        // rotate the starting fold per class so remainders spread out
        for (std::size_t i = 0; i < by_class[c].size(); ++i)
            fold_members[(i + c) % k_folds].push_back(by_class[c][i]);
    }

    std::vector<FoldIndices> folds(k_folds);
    for (std::size_t f = 0; f < k_folds; ++f) {
        std::sort(fold_members[f].begin(), fold_members[f].end());
        folds[f].valid = fold_members[f];
        for (std::size_t g = 0; g < k_folds; ++g)
            if (g != f)
                folds[f].train.insert(folds[f].train.end(), fold_members[g].begin(),
                                      fold_members[g].end());
        std::sort(folds[f].train.begin(), folds[f].train.end());
    }
    return folds;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
stratified_holdout(const LabeledDataset& ds, double holdout_fraction, std::uint64_t seed) {
    if (holdout_fraction <= 0.0 || holdout_fraction >= 1.0)
        throw data_error("holdout_fraction must be in (0,1)");
    auto by_class = indices_per_class(ds);
    std::vector<std::size_t> keep, held;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto rng = make_rng(seed, c + 1000);
        std::shuffle(by_class[c].begin(), by_class[c].end(), rng);
        std::size_t n = by_class[c].size();
        std::size_t h = static_cast<std::size_t>(std::llround(holdout_fraction * static_cast<double>(n)));
        if (n >= 2) h = std::clamp<std::size_t>(h, 1, n - 1);
        else h = 0;
        for (std::size_t i = 0; i < n; ++i)
            (i < h ? held : keep).push_back(by_class[c][i]);
    }
    std::sort(keep.begin(), keep.end());
    std::sort(held.begin(), held.end());
    return {keep, held};
}

}  // namespace trajml
