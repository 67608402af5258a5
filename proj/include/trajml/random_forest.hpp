#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "trajml/decision_tree.hpp"

namespace trajml {

struct RandomForestParams {
    std::size_t n_trees = 128;
    std::size_t max_depth = 16;
    double max_features_fraction = 0.5;
    std::size_t min_samples_leaf = 1;
};

// Bagged CART ensemble; probabilities are the mean of member leaf
// distributions.
class RandomForestClassifier final : public Classifier {
public:
    static RandomForestClassifier fit(const double* x, std::size_t rows, std::size_t cols,
                                      std::span<const int> y,
                                      std::span<const double> sample_weight,
                                      std::size_t num_classes, const RandomForestParams& params,
                                      std::uint64_t seed);

    std::size_t num_classes() const override { return num_classes_; }
    std::size_t num_features() const override { return num_features_; }
    void predict_row(std::span<const double> x, std::span<double> out) const override;

    nlohmann::ordered_json to_json() const override;
    static RandomForestClassifier from_json(const nlohmann::json& j);

    std::size_t tree_count() const { return trees_.size(); }

private:
    std::vector<DecisionTreeClassifier> trees_;
    std::size_t num_classes_ = 0;
    std::size_t num_features_ = 0;
};

}  // namespace trajml
