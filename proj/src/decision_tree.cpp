#include "trajml/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trajml/error.hpp"
#include "trajml/random.hpp"

namespace trajml {

namespace {

double impurity(std::span<const double> class_weight_sum, double total, SplitCriterion crit) {
    if (total <= 0) return 0.0;
    double v = crit == SplitCriterion::Gini ? 1.0 : 0.0;
    for (double s : class_weight_sum) {
        if (s <= 0) continue;
        const double p = s / total;
        if (crit == SplitCriterion::Gini)
            v -= p * p;
        else
            v -= p * std::log(p);
    }
    return v;
}

struct Builder {
    const double* x;
    std::size_t cols;
    std::span<const int> y;
    std::span<const double> w;
    std::size_t num_classes;
    const DecisionTreeParams& params;
    Rng rng;
    std::vector<DecisionTreeClassifier::Node> nodes;

    std::int32_t make_leaf(const std::vector<double>& class_sum, double total) {
        DecisionTreeClassifier::Node node;
        node.probs.resize(num_classes, 0.0);
        if (total > 0)
            for (std::size_t c = 0; c < num_classes; ++c) node.probs[c] = class_sum[c] / total;
        else
            node.probs.assign(num_classes, 1.0 / static_cast<double>(num_classes));
        nodes.push_back(std::move(node));
        return static_cast<std::int32_t>(nodes.size() - 1);
    }

    std::int32_t build(std::vector<std::size_t>& idx, std::size_t depth) {
        std::vector<double> class_sum(num_classes, 0.0);
        double total = 0;
        for (std::size_t i : idx) {
            class_sum[static_cast<std::size_t>(y[i])] += w[i];
            total += w[i];
        }
        const double node_impurity = impurity(class_sum, total, params.criterion);
        const bool pure = node_impurity <= 1e-12;
        if (pure || depth >= params.max_depth || idx.size() < 2 * params.min_samples_leaf)
            return make_leaf(class_sum, total);

        // candidate feature subset
        std::vector<std::size_t> feats(cols);
        std::iota(feats.begin(), feats.end(), 0);
        if (params.max_features > 0 && params.max_features < cols) {
            std::shuffle(feats.begin(), feats.end(), rng);
            feats.resize(params.max_features);
            std::sort(feats.begin(), feats.end());
        }

        int best_feature = -1;
        double best_threshold = 0, best_score = node_impurity - 1e-12;
        const bool gini = params.criterion == SplitCriterion::Gini;
        std::vector<std::pair<double, std::size_t>> order(idx.size());
        std::vector<double> left_sum(num_classes), right_sum(num_classes);
        auto xlogx = [](double v) { return v > 0 ? v * std::log(v) : 0.0; };

        for (std::size_t f : feats) {
            for (std::size_t pos = 0; pos < idx.size(); ++pos)
                order[pos] = {x[idx[pos] * cols + f], idx[pos]};
            std::sort(order.begin(), order.end());

            // incremental impurity statistics: for gini the sum of squared
            // class weights, for entropy the sum of s*log(s)
            std::fill(left_sum.begin(), left_sum.end(), 0.0);
            right_sum = class_sum;
            double left_total = 0;
            double stat_left = 0, stat_right = 0;
            for (std::size_t c = 0; c < num_classes; ++c)
                stat_right += gini ? class_sum[c] * class_sum[c] : xlogx(class_sum[c]);

            for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
                const std::size_t i = order[pos].second;
                const auto c = static_cast<std::size_t>(y[i]);
                const double wi = w[i];
                if (gini) {
                    stat_left += 2 * left_sum[c] * wi + wi * wi;
                    stat_right += -2 * right_sum[c] * wi + wi * wi;
                } else {
                    stat_left += xlogx(left_sum[c] + wi) - xlogx(left_sum[c]);
                    stat_right += xlogx(right_sum[c] - wi) - xlogx(right_sum[c]);
                }
                left_sum[c] += wi;
                right_sum[c] -= wi;
                left_total += wi;

                const double v = order[pos].first;
                const double v_next = order[pos + 1].first;
                if (v == v_next) continue;
                const std::size_t n_left = pos + 1, n_right = order.size() - n_left;
                if (n_left < params.min_samples_leaf || n_right < params.min_samples_leaf)
                    continue;
                const double right_total = total - left_total;
                // weighted-impurity numerators: T*(1 - G/T^2) = T - G/T for
                // gini, T*log(T) - S for entropy
                double score;
                if (gini) {
                    score = (left_total > 0 ? left_total - stat_left / left_total : 0.0) +
                            (right_total > 0 ? right_total - stat_right / right_total : 0.0);
                } else {
                    score = (left_total > 0 ? xlogx(left_total) - stat_left : 0.0) +
                            (right_total > 0 ? xlogx(right_total) - stat_right : 0.0);
                }
                score /= total;
                if (score < best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_threshold = v + 0.5 * (v_next - v);
                }
            }
        }

        if (best_feature < 0) return make_leaf(class_sum, total);

        std::vector<std::size_t> left_idx, right_idx;
        for (std::size_t i : idx) {
            if (x[i * cols + static_cast<std::size_t>(best_feature)] <= best_threshold)
                left_idx.push_back(i);
            else
                right_idx.push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();

        DecisionTreeClassifier::Node node;
        node.feature = best_feature;
        node.threshold = best_threshold;
        nodes.push_back(node);
        const auto self = static_cast<std::int32_t>(nodes.size() - 1);
        const std::int32_t left = build(left_idx, depth + 1);
        const std::int32_t right = build(right_idx, depth + 1);
        nodes[static_cast<std::size_t>(self)].left = left;
        nodes[static_cast<std::size_t>(self)].right = right;
        return self;
    }
};

}  // namespace

DecisionTreeClassifier DecisionTreeClassifier::fit(const double* x, std::size_t rows,
                                                   std::size_t cols, std::span<const int> y,
                                                   std::span<const double> sample_weight,
                                                   std::size_t num_classes,
                                                   const DecisionTreeParams& params,
                                                   std::uint64_t seed) {
    if (rows == 0) throw data_error("cannot fit a tree on an empty dataset");
    std::vector<double> unit_w;
    if (sample_weight.empty()) {
        unit_w.assign(rows, 1.0);
        sample_weight = unit_w;
    }
    Builder b{x, cols, y, sample_weight, num_classes, params, make_rng(seed), {}};
    std::vector<std::size_t> idx(rows);
    std::iota(idx.begin(), idx.end(), 0);
    b.build(idx, 0);

    DecisionTreeClassifier tree;
    tree.nodes_ = std::move(b.nodes);
    tree.num_classes_ = num_classes;
    tree.num_features_ = cols;
    return tree;
}

void DecisionTreeClassifier::predict_row(std::span<const double> x, std::span<double> out) const {
    std::size_t i = 0;
    while (nodes_[i].feature >= 0)
        i = static_cast<std::size_t>(x[static_cast<std::size_t>(nodes_[i].feature)] <=
                                             nodes_[i].threshold
                                         ? nodes_[i].left
                                         : nodes_[i].right);
    const auto& p = nodes_[i].probs;
    std::copy(p.begin(), p.end(), out.begin());
}

nlohmann::ordered_json DecisionTreeClassifier::to_json() const {
    nlohmann::ordered_json j;
    j["type"] = "decision_tree";
    j["classes"] = num_classes_;
    j["features"] = num_features_;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& n : nodes_) {
        nlohmann::ordered_json jn;
        jn["f"] = n.feature;
        jn["t"] = n.threshold;
        jn["l"] = n.left;
        jn["r"] = n.right;
        if (n.feature < 0) jn["p"] = n.probs;
        arr.push_back(std::move(jn));
    }
    j["nodes"] = std::move(arr);
    return j;
}

DecisionTreeClassifier DecisionTreeClassifier::from_json(const nlohmann::json& j) {
    DecisionTreeClassifier tree;
    tree.num_classes_ = j.at("classes").get<std::size_t>();
    tree.num_features_ = j.at("features").get<std::size_t>();
    for (const auto& jn : j.at("nodes")) {
        Node n;
        n.feature = jn.at("f").get<int>();
        n.threshold = jn.at("t").get<double>();
        n.left = jn.at("l").get<std::int32_t>();
        n.right = jn.at("r").get<std::int32_t>();
        if (n.feature < 0) n.probs = jn.at("p").get<std::vector<double>>();
        tree.nodes_.push_back(std::move(n));
    }
    return tree;
}

}  // namespace trajml
