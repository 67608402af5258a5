#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trajml/classifier.hpp"

namespace trajml {

struct HistGbdtParams {
    std::size_t n_rounds = 128;
    double learning_rate = 0.1;
    std::size_t max_bins = 64;
    std::size_t max_leaf_nodes = 31;
    double l2 = 1e-3;
};

// Histogram gradient boosting: features are quantile-binned once, then each
// round grows one regression tree per class (best-first, leaf-limited) on the
// softmax cross-entropy gradients. Sample weights scale the gradients.
class HistGbdtClassifier final : public Classifier {
public:
    struct TreeNode {
        int feature = -1;     // -1 for leaves
        int bin_threshold = 0; // go left when bin(x[feature]) <= bin_threshold
        double threshold = 0.0; // raw-value threshold for prediction
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;   // leaves only
    };
    using Tree = std::vector<TreeNode>;

    static HistGbdtClassifier fit(const double* x, std::size_t rows, std::size_t cols,
                                  std::span<const int> y, std::span<const double> sample_weight,
                                  std::size_t num_classes, const HistGbdtParams& params,
                                  std::uint64_t seed);

    std::size_t num_classes() const override { return num_classes_; }
    std::size_t num_features() const override { return num_features_; }
    void predict_row(std::span<const double> x, std::span<double> out) const override;

    nlohmann::ordered_json to_json() const override;
    static HistGbdtClassifier from_json(const nlohmann::json& j);

    std::size_t round_count() const { return trees_.size(); }

private:
    std::vector<std::vector<Tree>> trees_;  // [round][class]
    std::vector<double> base_score_;        // per-class log prior
    double learning_rate_ = 0.1;
    std::size_t num_classes_ = 0;
    std::size_t num_features_ = 0;
};

}  // namespace trajml
