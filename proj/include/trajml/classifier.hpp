#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <json.hpp>

#include "trajml/dataset.hpp"

namespace trajml {

// Immutable fitted classifier; concurrent prediction calls are safe.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual std::size_t num_classes() const = 0;
    virtual std::size_t num_features() const = 0;

    // Writes a length-C probability simplex into `out`.
    virtual void predict_row(std::span<const double> x, std::span<double> out) const = 0;

    virtual nlohmann::ordered_json to_json() const = 0;
};

// m x C probability matrix, row-major. Throws E_DATA on width mismatch.
std::vector<double> predict_proba(const Classifier& model, const double* x,
                                  std::size_t rows, std::size_t cols);
std::vector<double> predict_proba(const Classifier& model, const LabeledDataset& ds);

// Argmax per probability row; ties break toward the smaller class id.
std::vector<int> argmax_labels(std::span<const double> proba, std::size_t rows,
                               std::size_t num_classes);

std::vector<int> predict_label(const Classifier& model, const LabeledDataset& ds);

}  // namespace trajml
