#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "trajml/classifier.hpp"
#include "trajml/config_space.hpp"
#include "trajml/imbalance.hpp"

namespace trajml {

// Declared hyperparameter space for one algorithm, including the shared
// `balancing` categorical.
HyperparameterSpace default_space(AlgorithmId alg);

struct TrainedModel {
    AlgorithmId algorithm = AlgorithmId::DecisionTree;
    std::shared_ptr<const Classifier> model;
    std::size_t class_count = 0;
    std::size_t size_bytes = 0;  // canonical serialized size
    Configuration config;
    std::uint64_t seed = 0;
    double train_seconds = 0.0;
};

// Trains the configured algorithm. The config's `balancing` value is applied
// by the caller (resampling) or passed here as `weights` (weighting); fit
// itself never resamples. Throws E_DATA on a single-class dataset and
// E_SPACE on an invalid config.
TrainedModel fit(AlgorithmId alg, const Configuration& config, const LabeledDataset& ds,
                 const ClassWeights* weights, std::uint64_t seed);

// Applies the config's balancing strategy to `ds`, then fits; the standard
// entry point used by CASH fold evaluation and candidate refits.
TrainedModel fit_with_balancing(const Configuration& config, const LabeledDataset& ds,
                                std::uint64_t seed);

BalancingStrategy balancing_of(const Configuration& config);

// Size of the canonical serialized form.
std::size_t model_size(const Classifier& model);

std::string serialize_model(const Classifier& model);
std::shared_ptr<Classifier> deserialize_model(const std::string& text);

}  // namespace trajml
