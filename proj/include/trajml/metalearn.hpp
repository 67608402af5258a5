#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajml/cash.hpp"
#include "trajml/dataset.hpp"

namespace trajml {

struct MetaFeatures {
    double n_samples = 0;
    double n_features = 0;
    double n_classes = 0;
    double class_entropy = 0;    // nats
    double imbalance_ratio = 1;  // max N_i / min N_i
    double feature_mean_std = 0; // mean of per-feature std
    double log_n_samples = 0;
    double log_n_features = 0;

    std::vector<double> as_vector() const;
    static constexpr std::size_t dim = 8;
};

MetaFeatures compute_meta_features(const LabeledDataset& ds);

struct KnowledgeBaseEntry {
    std::string dataset_id;
    MetaFeatures meta;
    std::vector<std::pair<Configuration, double>> top_configs;  // (config, mean CV loss)
};

struct KnowledgeBase {
    std::vector<KnowledgeBaseEntry> entries;
    std::vector<double> feature_mean;  // per meta-feature, over entries
    std::vector<double> feature_std;
    std::string space_hash;

    void recompute_normalization();

    nlohmann::ordered_json to_json() const;
    static KnowledgeBase from_json(const nlohmann::json& j);

    void save(const std::string& path) const;
    // Throws E_VERSION when the stored ConfigSpace hash differs from `space`.
    static KnowledgeBase load(const std::string& path, const ConfigSpace& space);
};

// Offline phase: runs CASH on each dataset, keeps the top `configs_per_dataset`
// complete configurations per dataset.
KnowledgeBase build_knowledge_base(const std::vector<std::pair<std::string, LabeledDataset>>& datasets,
                                   const ConfigSpace& space, const BudgetSpec& budget_per_dataset,
                                   Metric metric = Metric::BalancedAccuracy,
                                   std::size_t configs_per_dataset = 5);

// Online phase: z-normalizes the query meta-features with the KB stats and
// returns the deduplicated union of top configs from the k nearest entries,
// ordered by ascending donor distance then ascending donor loss.
std::vector<Configuration> warmstart_select(const KnowledgeBase& kb, const MetaFeatures& mf,
                                            std::size_t k_datasets);

}  // namespace trajml
