#include "trajml/knn.hpp"

#include <algorithm>
#include <cmath>

#include "trajml/error.hpp"

namespace trajml {

KnnClassifier KnnClassifier::fit(const double* x, std::size_t rows, std::size_t cols,
                                 std::span<const int> y, std::size_t num_classes,
                                 const KnnParams& params, const ClassWeights* class_weight) {
    if (rows == 0) throw data_error("cannot fit k-NN on an empty dataset");
    if (params.k < 1) throw space_error("k must be >= 1");
    KnnClassifier model;
    model.params_ = params;
    model.params_.k = std::min(params.k, rows);
    model.data_.assign(x, x + rows * cols);
    model.labels_.assign(y.begin(), y.end());
    model.num_classes_ = num_classes;
    model.num_features_ = cols;
    if (class_weight)
        model.class_weight_ = class_weight->w;
    else
        model.class_weight_.assign(num_classes, 1.0);
    return model;
}

void KnnClassifier::predict_row(std::span<const double> x, std::span<double> out) const {
    const std::size_t n = labels_.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* p = data_.data() + i * num_features_;
        double d = 0;
        if (params_.metric == KnnMetric::Euclidean) {
            for (std::size_t j = 0; j < num_features_; ++j) {
                double diff = x[j] - p[j];
                d += diff * diff;
            }
            d = std::sqrt(d);
        } else {
            for (std::size_t j = 0; j < num_features_; ++j) d += std::abs(x[j] - p[j]);
        }
        dist[i] = {d, i};
    }
    const std::size_t k = params_.k;
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());

    std::fill(out.begin(), out.end(), 0.0);
    double total = 0;
    for (std::size_t t = 0; t < k; ++t) {
        const auto [d, i] = dist[t];
        double vote = class_weight_[static_cast<std::size_t>(labels_[i])];
        if (params_.weighting == KnnVoteWeighting::InverseDistance) vote /= (d + 1e-12);
        out[static_cast<std::size_t>(labels_[i])] += vote;
        total += vote;
    }
    for (std::size_t c = 0; c < num_classes_; ++c) out[c] /= total;
}

nlohmann::ordered_json KnnClassifier::to_json() const {
    nlohmann::ordered_json j;
    j["type"] = "knn";
    j["classes"] = num_classes_;
    j["features"] = num_features_;
    j["k"] = params_.k;
    j["weighting"] = params_.weighting == KnnVoteWeighting::Uniform ? "uniform" : "inverse_distance";
    j["metric"] = params_.metric == KnnMetric::Euclidean ? "euclidean" : "manhattan";
    j["class_weight"] = class_weight_;
    j["labels"] = labels_;
    j["data"] = data_;
    return j;
}

KnnClassifier KnnClassifier::from_json(const nlohmann::json& j) {
    KnnClassifier m;
    m.num_classes_ = j.at("classes").get<std::size_t>();
    m.num_features_ = j.at("features").get<std::size_t>();
    m.params_.k = j.at("k").get<std::size_t>();
    m.params_.weighting = j.at("weighting").get<std::string>() == "uniform"
                              ? KnnVoteWeighting::Uniform
                              : KnnVoteWeighting::InverseDistance;
    m.params_.metric = j.at("metric").get<std::string>() == "euclidean" ? KnnMetric::Euclidean
                                                                        : KnnMetric::Manhattan;
    m.class_weight_ = j.at("class_weight").get<std::vector<double>>();
    m.labels_ = j.at("labels").get<std::vector<int>>();
    m.data_ = j.at("data").get<std::vector<double>>();
    return m;
}

}  // namespace trajml
