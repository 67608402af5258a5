#include "trajml/random_forest.hpp"

#include <algorithm>
#include <cmath>

#include "trajml/error.hpp"
#include "trajml/random.hpp"

namespace trajml {

RandomForestClassifier RandomForestClassifier::fit(const double* x, std::size_t rows,
                                                   std::size_t cols, std::span<const int> y,
                                                   std::span<const double> sample_weight,
                                                   std::size_t num_classes,
                                                   const RandomForestParams& params,
                                                   std::uint64_t seed) {
    if (rows == 0) throw data_error("cannot fit a forest on an empty dataset");
    std::vector<double> unit_w;
    if (sample_weight.empty()) {
        unit_w.assign(rows, 1.0);
        sample_weight = unit_w;
    }

    DecisionTreeParams tree_params;
    tree_params.max_depth = params.max_depth;
    tree_params.min_samples_leaf = params.min_samples_leaf;
    tree_params.criterion = SplitCriterion::Gini;
    tree_params.max_features = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(params.max_features_fraction *
                                                 static_cast<double>(cols))));

    RandomForestClassifier forest;
    forest.num_classes_ = num_classes;
    forest.num_features_ = cols;
    forest.trees_.reserve(params.n_trees);

    std::vector<double> boot_x;
    std::vector<int> boot_y;
    std::vector<double> boot_w;
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        auto rng = make_rng(seed, t);
        std::uniform_int_distribution<std::size_t> pick(0, rows - 1);
        boot_x.clear();
        boot_y.clear();
        boot_w.clear();
        for (std::size_t i = 0; i < rows; ++i) {
            std::size_t src = pick(rng);
            boot_x.insert(boot_x.end(), x + src * cols, x + (src + 1) * cols);
            boot_y.push_back(y[src]);
            boot_w.push_back(sample_weight[src]);
        }
        forest.trees_.push_back(DecisionTreeClassifier::fit(
            boot_x.data(), rows, cols, boot_y, boot_w, num_classes, tree_params,
            mix_seed(seed, t + 1'000'000)));
    }
    return forest;
}

void RandomForestClassifier::predict_row(std::span<const double> x, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> tree_out(num_classes_);
    for (const auto& tree : trees_) {
        tree.predict_row(x, tree_out);
        for (std::size_t c = 0; c < num_classes_; ++c) out[c] += tree_out[c];
    }
    const double inv = 1.0 / static_cast<double>(trees_.size());
    for (std::size_t c = 0; c < num_classes_; ++c) out[c] *= inv;
}

nlohmann::ordered_json RandomForestClassifier::to_json() const {
    nlohmann::ordered_json j;
    j["type"] = "random_forest";
    j["classes"] = num_classes_;
    j["features"] = num_features_;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& tree : trees_) arr.push_back(tree.to_json());
    j["trees"] = std::move(arr);
    return j;
}

RandomForestClassifier RandomForestClassifier::from_json(const nlohmann::json& j) {
    RandomForestClassifier forest;
    forest.num_classes_ = j.at("classes").get<std::size_t>();
    forest.num_features_ = j.at("features").get<std::size_t>();
    for (const auto& jt : j.at("trees"))
        forest.trees_.push_back(DecisionTreeClassifier::from_json(jt));
    return forest;
}

}  // namespace trajml
