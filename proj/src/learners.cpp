#include "trajml/learners.hpp"

#include <chrono>

#include "trajml/decision_tree.hpp"
#include "trajml/error.hpp"
#include "trajml/hist_gbdt.hpp"
#include "trajml/knn.hpp"
#include "trajml/random.hpp"
#include "trajml/random_forest.hpp"

namespace trajml {

HyperparameterSpace default_space(AlgorithmId alg) {
    auto space = default_config_space();
    HyperparameterSpace sp = space.subspace(alg);
    sp.params.push_back(space.balancing);
    return sp;
}

BalancingStrategy balancing_of(const Configuration& config) {
    BalancingStrategy s;
    s.kind = balancing_from_string(config.get_cat("balancing"));
    return s;
}

namespace {

std::vector<double> expand_weights(const ClassWeights& weights, std::span<const int> y) {
    std::vector<double> out;
    out.reserve(y.size());
    for (int c : y) out.push_back(weights.w[static_cast<std::size_t>(c)]);
    return out;
}

}  // namespace

TrainedModel fit(AlgorithmId alg, const Configuration& config, const LabeledDataset& ds,
                 const ClassWeights* weights, std::uint64_t seed) {
    if (ds.rows == 0) throw data_error("cannot train on an empty dataset");
    if (ds.num_classes() < 2) throw data_error("training requires at least 2 classes");
    {
        auto dist = class_distribution(ds);
        std::size_t present = 0;
        for (std::size_t c : dist.counts) present += c > 0 ? 1 : 0;
        if (present < 2) throw data_error("training data contains a single class");
    }
    default_config_space().validate(config);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<double> sw;
    if (weights) sw = expand_weights(*weights, ds.labels);

    std::shared_ptr<const Classifier> model;
    switch (alg) {
        case AlgorithmId::DecisionTree: {
            DecisionTreeParams p;
            p.max_depth = static_cast<std::size_t>(config.get_int("max_depth"));
            p.min_samples_leaf = static_cast<std::size_t>(config.get_int("min_samples_leaf"));
            p.criterion = config.get_cat("criterion") == "gini" ? SplitCriterion::Gini
                                                                : SplitCriterion::Entropy;
            model = std::make_shared<DecisionTreeClassifier>(DecisionTreeClassifier::fit(
                ds.features.data(), ds.rows, ds.cols, ds.labels, sw, ds.num_classes(), p, seed));
            break;
        }
        case AlgorithmId::RandomForest: {
            RandomForestParams p;
            p.n_trees = static_cast<std::size_t>(config.get_int("n_trees"));
            p.max_depth = static_cast<std::size_t>(config.get_int("max_depth"));
            p.max_features_fraction = config.get_real("max_features_fraction");
            p.min_samples_leaf = static_cast<std::size_t>(config.get_int("min_samples_leaf"));
            model = std::make_shared<RandomForestClassifier>(RandomForestClassifier::fit(
                ds.features.data(), ds.rows, ds.cols, ds.labels, sw, ds.num_classes(), p, seed));
            break;
        }
        case AlgorithmId::Knn: {
            KnnParams p;
            p.k = static_cast<std::size_t>(config.get_int("k"));
            p.weighting = config.get_cat("weighting") == "uniform"
                              ? KnnVoteWeighting::Uniform
                              : KnnVoteWeighting::InverseDistance;
            p.metric = config.get_cat("metric") == "euclidean" ? KnnMetric::Euclidean
                                                               : KnnMetric::Manhattan;
            model = std::make_shared<KnnClassifier>(KnnClassifier::fit(
                ds.features.data(), ds.rows, ds.cols, ds.labels, ds.num_classes(), p, weights));
            break;
        }
        case AlgorithmId::HistGradientBoosting: {
            HistGbdtParams p;
            p.n_rounds = static_cast<std::size_t>(config.get_int("n_rounds"));
            p.learning_rate = config.get_real("learning_rate");
            p.max_bins = static_cast<std::size_t>(config.get_int("max_bins"));
            p.max_leaf_nodes = static_cast<std::size_t>(config.get_int("max_leaf_nodes"));
            p.l2 = config.get_real("l2");
            model = std::make_shared<HistGbdtClassifier>(HistGbdtClassifier::fit(
                ds.features.data(), ds.rows, ds.cols, ds.labels, sw, ds.num_classes(), p, seed));
            break;
        }
    }

    TrainedModel tm;
    tm.algorithm = alg;
    tm.model = model;
    tm.class_count = ds.num_classes();
    tm.size_bytes = model_size(*model);
    tm.config = config;
    tm.seed = seed;
    tm.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return tm;
}

TrainedModel fit_with_balancing(const Configuration& config, const LabeledDataset& ds,
                                std::uint64_t seed) {
    const BalancingStrategy strategy = balancing_of(config);
    LabeledDataset train = apply_balancing(ds, strategy, mix_seed(seed, 0xba1a));
    if (strategy.kind == BalancingKind::Weighting) {
        ClassWeights w = class_weights(class_distribution(train));
        return fit(config.algorithm, config, train, &w, seed);
    }
    return fit(config.algorithm, config, train, nullptr, seed);
}

std::size_t model_size(const Classifier& model) { return serialize_model(model).size(); }

std::string serialize_model(const Classifier& model) { return model.to_json().dump(); }

std::shared_ptr<Classifier> deserialize_model(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    const std::string type = j.at("type").get<std::string>();
    if (type == "decision_tree")
        return std::make_shared<DecisionTreeClassifier>(DecisionTreeClassifier::from_json(j));
    if (type == "random_forest")
        return std::make_shared<RandomForestClassifier>(RandomForestClassifier::from_json(j));
    if (type == "knn")
        return std::make_shared<KnnClassifier>(KnnClassifier::from_json(j));
    if (type == "hist_gradient_boosting")
        return std::make_shared<HistGbdtClassifier>(HistGbdtClassifier::from_json(j));
    throw schema_error("unknown model type '" + type + "'");
}

}  // namespace trajml
