#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "trajml/classifier.hpp"

namespace trajml {

enum class SplitCriterion { Gini, Entropy };

struct DecisionTreeParams {
    std::size_t max_depth = std::numeric_limits<std::size_t>::max();
    std::size_t min_samples_leaf = 1;
    SplitCriterion criterion = SplitCriterion::Gini;
    // 0 means all features; otherwise each split considers a random subset
    // of this size (used by the forest).
    std::size_t max_features = 0;
};

// CART classifier with weighted impurity. Sample weights fold class weights
// into training; leaves store weighted class-probability vectors.
class DecisionTreeClassifier final : public Classifier {
public:
    struct Node {
        int feature = -1;          // -1 for leaves
        double threshold = 0.0;    // go left when x[feature] <= threshold
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::vector<double> probs; // leaves only
    };

    static DecisionTreeClassifier fit(const double* x, std::size_t rows, std::size_t cols,
                                      std::span<const int> y, std::span<const double> sample_weight,
                                      std::size_t num_classes, const DecisionTreeParams& params,
                                      std::uint64_t seed);

    std::size_t num_classes() const override { return num_classes_; }
    std::size_t num_features() const override { return num_features_; }
    void predict_row(std::span<const double> x, std::span<double> out) const override;

    nlohmann::ordered_json to_json() const override;
    static DecisionTreeClassifier from_json(const nlohmann::json& j);

    std::size_t node_count() const { return nodes_.size(); }
    const std::vector<Node>& nodes() const { return nodes_; }

private:
    std::vector<Node> nodes_;
    std::size_t num_classes_ = 0;
    std::size_t num_features_ = 0;
};

}  // namespace trajml
