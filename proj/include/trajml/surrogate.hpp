#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace trajml {

struct RegressionForestParams {
    std::size_t n_trees = 32;
    std::size_t max_depth = 24;
    std::size_t min_samples_leaf = 2;
    double max_features_fraction = 0.8;
};

// Bagged variance-reduction regression trees over encoded configurations;
// the per-tree spread supplies the predictive variance used by expected
// improvement.
class RegressionForest {
public:
    static RegressionForest fit(const std::vector<std::vector<double>>& x,
                                std::span<const double> y,
                                const RegressionForestParams& params, std::uint64_t seed);

    // Returns (mean, stddev) across trees.
    std::pair<double, double> predict(std::span<const double> x) const;

    bool empty() const { return trees_.empty(); }

private:
    struct Node {
        int feature = -1;
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;
    };
    using Tree = std::vector<Node>;

    std::vector<Tree> trees_;
};

}  // namespace trajml
