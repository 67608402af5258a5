#include "trajml/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trajml/random.hpp"

namespace trajml {

namespace {

struct TreeBuilder {
    const std::vector<std::vector<double>>& x;
    std::span<const double> y;
    const RegressionForestParams& params;
    std::size_t max_features;
    Rng rng;
    std::vector<double> scratch_values;

    struct Node {
        int feature = -1;
        double threshold = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        double value = 0.0;
    };
    std::vector<Node> nodes;

    std::int32_t build(std::vector<std::size_t>& idx, std::size_t depth) {
        double sum = 0, sq = 0;
        for (std::size_t i : idx) {
            sum += y[i];
            sq += y[i] * y[i];
        }
        const double n = static_cast<double>(idx.size());
        const double mean = sum / n;
        const double sse = sq - sum * mean;

        if (depth >= params.max_depth || idx.size() < 2 * params.min_samples_leaf ||
            sse <= 1e-12) {
            nodes.push_back({-1, 0.0, -1, -1, mean});
            return static_cast<std::int32_t>(nodes.size() - 1);
        }

        const std::size_t dim = x[0].size();
        std::vector<std::size_t> feats(dim);
        std::iota(feats.begin(), feats.end(), 0);
        if (max_features < dim) {
            std::shuffle(feats.begin(), feats.end(), rng);
            feats.resize(max_features);
            std::sort(feats.begin(), feats.end());
        }

        int best_f = -1;
        double best_t = 0, best_score = sse - 1e-12;
        std::vector<std::size_t> order(idx);
        for (std::size_t f : feats) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return x[a][f] < x[b][f] || (x[a][f] == x[b][f] && a < b);
            });
            double lsum = 0, lsq = 0;
            for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
                const std::size_t i = order[pos];
                lsum += y[i];
                lsq += y[i] * y[i];
                const double v = x[i][f], v_next = x[order[pos + 1]][f];
                if (v == v_next) continue;
                const std::size_t nl = pos + 1, nr = order.size() - nl;
                if (nl < params.min_samples_leaf || nr < params.min_samples_leaf) continue;
                const double rsum = sum - lsum, rsq = sq - lsq;
                const double score = (lsq - lsum * lsum / static_cast<double>(nl)) +
                                     (rsq - rsum * rsum / static_cast<double>(nr));
                if (score < best_score) {
                    best_score = score;
                    best_f = static_cast<int>(f);
                    best_t = v + 0.5 * (v_next - v);
                }
            }
        }

        if (best_f < 0) {
            nodes.push_back({-1, 0.0, -1, -1, mean});
            return static_cast<std::int32_t>(nodes.size() - 1);
        }

        std::vector<std::size_t> li, ri;
        for (std::size_t i : idx)
            (x[i][static_cast<std::size_t>(best_f)] <= best_t ? li : ri).push_back(i);
        idx.clear();
        nodes.push_back({best_f, best_t, -1, -1, 0.0});
        const auto self = static_cast<std::int32_t>(nodes.size() - 1);
        const auto l = build(li, depth + 1);
        const auto r = build(ri, depth + 1);
        nodes[static_cast<std::size_t>(self)].left = l;
        nodes[static_cast<std::size_t>(self)].right = r;
        return self;
    }
};

}  // namespace

RegressionForest RegressionForest::fit(const std::vector<std::vector<double>>& x,
                                       std::span<const double> y,
                                       const RegressionForestParams& params, std::uint64_t seed) {
    RegressionForest forest;
    if (x.empty()) return forest;
    const std::size_t rows = x.size();
    const std::size_t dim = x[0].size();
    const auto max_features = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(params.max_features_fraction *
                                                 static_cast<double>(dim))));

    for (std::size_t t = 0; t < params.n_trees; ++t) {
        auto rng = make_rng(seed, t);
        std::uniform_int_distribution<std::size_t> pick(0, rows - 1);
        std::vector<std::size_t> boot(rows);
        for (auto& b : boot) b = pick(rng);

        // build on the bootstrap view by materializing a remapped sample
        std::vector<std::vector<double>> bx(rows);
        std::vector<double> by(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            bx[i] = x[boot[i]];
            by[i] = y[boot[i]];
        }
        TreeBuilder builder{bx, by, params, max_features, make_rng(seed, t + 5000), {}, {}};
        std::vector<std::size_t> idx(rows);
        std::iota(idx.begin(), idx.end(), 0);
        builder.build(idx, 0);

        Tree tree;
        tree.reserve(builder.nodes.size());
        for (const auto& n : builder.nodes)
            tree.push_back({n.feature, n.threshold, n.left, n.right, n.value});
        forest.trees_.push_back(std::move(tree));
    }
    return forest;
}

std::pair<double, double> RegressionForest::predict(std::span<const double> x) const {
    double sum = 0, sq = 0;
    for (const auto& tree : trees_) {
        std::size_t i = 0;
        while (tree[i].feature >= 0)
            i = static_cast<std::size_t>(
                x[static_cast<std::size_t>(tree[i].feature)] <= tree[i].threshold
                    ? tree[i].left
                    : tree[i].right);
        sum += tree[i].value;
        sq += tree[i].value * tree[i].value;
    }
    const double n = static_cast<double>(trees_.size());
    const double mean = sum / n;
    const double var = std::max(sq / n - mean * mean, 0.0);
    return {mean, std::sqrt(var)};
}

}  // namespace trajml
