#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace trajml {

// Row-major n x d feature matrix with integer class labels.
struct LabeledDataset {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> features;  // rows * cols, row-major
    std::vector<int> labels;       // rows entries, each in [0, class_names.size())
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;

    std::span<const double> row(std::size_t i) const {
        return {features.data() + i * cols, cols};
    }
    double at(std::size_t i, std::size_t j) const { return features[i * cols + j]; }
    std::size_t num_classes() const { return class_names.size(); }

    // Throws E_DATA on NaN/Inf features, out-of-range labels, or shape
    // inconsistencies.
    void validate() const;

    LabeledDataset select_rows(const std::vector<std::size_t>& idx) const;
};

struct ClassDistribution {
    std::vector<std::size_t> counts;  // per-class sample counts N_i
    std::size_t total = 0;            // N
};

ClassDistribution class_distribution(const LabeledDataset& ds);

// Feature CSV: header "f0,...,f{d-1},label"; label column holds class names.
LabeledDataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const LabeledDataset& ds, const std::string& path);

}  // namespace trajml
