#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "trajml/classifier.hpp"
#include "trajml/imbalance.hpp"

namespace trajml {

enum class KnnVoteWeighting { Uniform, InverseDistance };
enum class KnnMetric { Euclidean, Manhattan };

struct KnnParams {
    std::size_t k = 5;
    KnnVoteWeighting weighting = KnnVoteWeighting::Uniform;
    KnnMetric metric = KnnMetric::Euclidean;
};

// Brute-force k-NN. Under the `weighting` balancing strategy, neighbor votes
// are scaled by the stored class weights. Neighbor ties at equal distance
// break toward the smaller training index.
class KnnClassifier final : public Classifier {
public:
    static KnnClassifier fit(const double* x, std::size_t rows, std::size_t cols,
                             std::span<const int> y, std::size_t num_classes,
                             const KnnParams& params, const ClassWeights* class_weight);

    std::size_t num_classes() const override { return num_classes_; }
    std::size_t num_features() const override { return num_features_; }
    void predict_row(std::span<const double> x, std::span<double> out) const override;

    nlohmann::ordered_json to_json() const override;
    static KnnClassifier from_json(const nlohmann::json& j);

    std::size_t stored_rows() const { return labels_.size(); }

private:
    KnnParams params_;
    std::vector<double> data_;
    std::vector<int> labels_;
    std::vector<double> class_weight_;  // all ones when balancing is off
    std::size_t num_classes_ = 0;
    std::size_t num_features_ = 0;
};

}  // namespace trajml
