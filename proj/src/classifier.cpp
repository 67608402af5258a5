#include "trajml/classifier.hpp"

#include "trajml/error.hpp"

namespace trajml {

std::vector<double> predict_proba(const Classifier& model, const double* x, std::size_t rows,
                                  std::size_t cols) {
    if (cols != model.num_features())
        throw data_error("feature width " + std::to_string(cols) + " != model's " +
                         std::to_string(model.num_features()));
    const std::size_t c = model.num_classes();
    std::vector<double> out(rows * c, 0.0);
    for (std::size_t i = 0; i < rows; ++i)
        model.predict_row({x + i * cols, cols}, {out.data() + i * c, c});
    return out;
}

std::vector<double> predict_proba(const Classifier& model, const LabeledDataset& ds) {
    return predict_proba(model, ds.features.data(), ds.rows, ds.cols);
}

std::vector<int> argmax_labels(std::span<const double> proba, std::size_t rows,
                               std::size_t num_classes) {
    std::vector<int> out(rows, 0);
    for (std::size_t i = 0; i < rows; ++i) {
        const double* p = proba.data() + i * num_classes;
        std::size_t best = 0;
        for (std::size_t c = 1; c < num_classes; ++c)
            if (p[c] > p[best]) best = c;  // ties keep the smaller class id
        out[i] = static_cast<int>(best);
    }
    return out;
}

std::vector<int> predict_label(const Classifier& model, const LabeledDataset& ds) {
    auto proba = predict_proba(model, ds);
    return argmax_labels(proba, ds.rows, model.num_classes());
}

}  // namespace trajml
