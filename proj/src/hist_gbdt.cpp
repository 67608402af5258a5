#include "trajml/hist_gbdt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>

#include "trajml/error.hpp"

namespace trajml {

namespace {

struct BinnedData {
    std::vector<std::uint16_t> bins;        // rows * cols
    std::vector<std::vector<double>> edges; // per feature, ascending; bin b goes left of edges[b]
    std::size_t rows = 0, cols = 0;

    std::size_t bin_count(std::size_t f) const { return edges[f].size() + 1; }
};

BinnedData bin_features(const double* x, std::size_t rows, std::size_t cols,
                        std::size_t max_bins) {
    BinnedData bd;
    bd.rows = rows;
    bd.cols = cols;
    bd.edges.resize(cols);
    bd.bins.resize(rows * cols);
    std::vector<double> col(rows);
    for (std::size_t f = 0; f < cols; ++f) {
        for (std::size_t i = 0; i < rows; ++i) col[i] = x[i * cols + f];
        std::sort(col.begin(), col.end());
        auto& edges = bd.edges[f];
        for (std::size_t b = 1; b < max_bins; ++b) {
            const double q = col[b * rows / max_bins];
            if (q >= col[rows - 1]) break;  // keep the right side nonempty
            if (edges.empty() || q > edges.back()) edges.push_back(q);
        }
        for (std::size_t i = 0; i < rows; ++i) {
            const double v = x[i * cols + f];
            const auto it = std::lower_bound(edges.begin(), edges.end(), v);
            bd.bins[i * cols + f] =
                static_cast<std::uint16_t>(std::distance(edges.begin(), it));
        }
    }
    return bd;
}

struct NodeStats {
    std::vector<std::size_t> samples;
    double sum_g = 0, sum_h = 0;
};

struct SplitChoice {
    double gain = 0;
    int feature = -1;
    int bin = -1;
};

double leaf_objective(double g, double h, double l2) { return g * g / (h + l2); }

// Exact greedy over binned boundaries: maximize the standard second-order
// gain G_L^2/(H_L+l2) + G_R^2/(H_R+l2) - G^2/(H+l2).
SplitChoice best_split(const BinnedData& bd, const NodeStats& node, std::span<const double> g,
                       std::span<const double> h, double l2) {
    SplitChoice best;
    const double parent = leaf_objective(node.sum_g, node.sum_h, l2);
    std::vector<double> hist_g, hist_h;
    std::vector<std::size_t> hist_n;
    for (std::size_t f = 0; f < bd.cols; ++f) {
        const std::size_t nb = bd.bin_count(f);
        if (nb < 2) continue;
        hist_g.assign(nb, 0.0);
        hist_h.assign(nb, 0.0);
        hist_n.assign(nb, 0);
        for (std::size_t i : node.samples) {
            const std::uint16_t b = bd.bins[i * bd.cols + f];
            hist_g[b] += g[i];
            hist_h[b] += h[i];
            ++hist_n[b];
        }
        double gl = 0, hl = 0;
        std::size_t nl = 0;
        for (std::size_t b = 0; b + 1 < nb; ++b) {
            gl += hist_g[b];
            hl += hist_h[b];
            nl += hist_n[b];
            if (nl == 0 || nl == node.samples.size()) continue;
            const double gr = node.sum_g - gl, hr = node.sum_h - hl;
            const double gain =
                leaf_objective(gl, hl, l2) + leaf_objective(gr, hr, l2) - parent;
            if (gain > best.gain + 1e-12) {
                best.gain = gain;
                best.feature = static_cast<int>(f);
                best.bin = static_cast<int>(b);
            }
        }
    }
    return best;
}

struct GrowEntry {
    double gain;
    std::size_t order;  // insertion order, deterministic tie-break
    std::int32_t node_id;
    bool operator<(const GrowEntry& o) const {
        if (gain != o.gain) return gain < o.gain;
        return order > o.order;
    }
};

HistGbdtClassifier::Tree grow_tree(const BinnedData& bd, std::vector<std::size_t> root_samples,
                                   std::span<const double> g, std::span<const double> h,
                                   const HistGbdtParams& params, double lr) {
    HistGbdtClassifier::Tree tree;
    std::vector<NodeStats> stats;

    auto add_node = [&](std::vector<std::size_t>&& samples) {
        NodeStats ns;
        ns.samples = std::move(samples);
        for (std::size_t i : ns.samples) {
            ns.sum_g += g[i];
            ns.sum_h += h[i];
        }
        HistGbdtClassifier::TreeNode node;
        node.value = -ns.sum_g / (ns.sum_h + params.l2) * lr;
        tree.push_back(node);
        stats.push_back(std::move(ns));
        return static_cast<std::int32_t>(tree.size() - 1);
    };

    std::priority_queue<GrowEntry> frontier;
    std::size_t order = 0;
    std::vector<SplitChoice> choice;

    auto consider = [&](std::int32_t id) {
        SplitChoice sc = best_split(bd, stats[static_cast<std::size_t>(id)], g, h, params.l2);
        if (static_cast<std::size_t>(id) >= choice.size()) choice.resize(static_cast<std::size_t>(id) + 1);
        choice[static_cast<std::size_t>(id)] = sc;
        if (sc.feature >= 0) frontier.push({sc.gain, order++, id});
    };

    consider(add_node(std::move(root_samples)));
    std::size_t leaves = 1;
    while (leaves < params.max_leaf_nodes && !frontier.empty()) {
        const auto [gain, ord, id] = frontier.top();
        frontier.pop();
        const SplitChoice sc = choice[static_cast<std::size_t>(id)];
        auto& ns = stats[static_cast<std::size_t>(id)];

        std::vector<std::size_t> left, right;
        for (std::size_t i : ns.samples) {
            if (bd.bins[i * bd.cols + static_cast<std::size_t>(sc.feature)] <=
                static_cast<std::uint16_t>(sc.bin))
                left.push_back(i);
            else
                right.push_back(i);
        }
        ns.samples.clear();
        ns.samples.shrink_to_fit();

        auto& node = tree[static_cast<std::size_t>(id)];
        node.feature = sc.feature;
        node.bin_threshold = sc.bin;
        node.threshold = bd.edges[static_cast<std::size_t>(sc.feature)]
                                 [static_cast<std::size_t>(sc.bin)];
        const std::int32_t l = add_node(std::move(left));
        const std::int32_t r = add_node(std::move(right));
        tree[static_cast<std::size_t>(id)].left = l;
        tree[static_cast<std::size_t>(id)].right = r;
        consider(l);
        consider(r);
        ++leaves;  // one leaf became two
    }
    // release retained sample lists before returning
    return tree;
}

double tree_value(const HistGbdtClassifier::Tree& tree, std::span<const double> x) {
    std::size_t i = 0;
    while (tree[i].feature >= 0)
        i = static_cast<std::size_t>(
            x[static_cast<std::size_t>(tree[i].feature)] <= tree[i].threshold ? tree[i].left
                                                                              : tree[i].right);
    return tree[i].value;
}

}  // namespace

HistGbdtClassifier HistGbdtClassifier::fit(const double* x, std::size_t rows, std::size_t cols,
                                           std::span<const int> y,
                                           std::span<const double> sample_weight,
                                           std::size_t num_classes, const HistGbdtParams& params,
                                           std::uint64_t /*seed*/) {
    if (rows == 0) throw data_error("cannot fit boosting on an empty dataset");
    std::vector<double> unit_w;
    if (sample_weight.empty()) {
        unit_w.assign(rows, 1.0);
        sample_weight = unit_w;
    }

    HistGbdtClassifier model;
    model.num_classes_ = num_classes;
    model.num_features_ = cols;
    model.learning_rate_ = params.learning_rate;

    // log-prior base scores
    std::vector<double> prior(num_classes, 0.0);
    double wsum = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        prior[static_cast<std::size_t>(y[i])] += sample_weight[i];
        wsum += sample_weight[i];
    }
    model.base_score_.resize(num_classes);
    for (std::size_t c = 0; c < num_classes; ++c)
        model.base_score_[c] = std::log(std::max(prior[c] / wsum, 1e-12));

    const BinnedData bd = bin_features(x, rows, cols, std::max<std::size_t>(params.max_bins, 2));

    std::vector<double> score(rows * num_classes);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t c = 0; c < num_classes; ++c)
            score[i * num_classes + c] = model.base_score_[c];

    std::vector<double> g(rows), h(rows), prob(num_classes);
    std::vector<std::size_t> all(rows);
    std::iota(all.begin(), all.end(), 0);

    for (std::size_t round = 0; round < params.n_rounds; ++round) {
        model.trees_.emplace_back();
        auto& per_class = model.trees_.back();
        per_class.reserve(num_classes);

        // softmax gradients/hessians, scaled by sample weight
        std::vector<double> groups_g(rows * num_classes), groups_h(rows * num_classes);
        for (std::size_t i = 0; i < rows; ++i) {
            double mx = score[i * num_classes];
            for (std::size_t c = 1; c < num_classes; ++c)
                mx = std::max(mx, score[i * num_classes + c]);
            double z = 0;
            for (std::size_t c = 0; c < num_classes; ++c) {
                prob[c] = std::exp(score[i * num_classes + c] - mx);
                z += prob[c];
            }
            for (std::size_t c = 0; c < num_classes; ++c) {
                const double p = prob[c] / z;
                const double w = sample_weight[i];
                groups_g[i * num_classes + c] =
                    w * (p - (static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0));
                groups_h[i * num_classes + c] = std::max(w * p * (1.0 - p), 1e-12);
            }
        }

        for (std::size_t c = 0; c < num_classes; ++c) {
            for (std::size_t i = 0; i < rows; ++i) {
                g[i] = groups_g[i * num_classes + c];
                h[i] = groups_h[i * num_classes + c];
            }
            Tree tree = grow_tree(bd, all, g, h, params, params.learning_rate);
            for (std::size_t i = 0; i < rows; ++i)
                score[i * num_classes + c] += tree_value(tree, {x + i * cols, cols});
            per_class.push_back(std::move(tree));
        }
    }
    return model;
}

void HistGbdtClassifier::predict_row(std::span<const double> x, std::span<double> out) const {
    std::vector<double> score(base_score_);
    for (const auto& per_class : trees_)
        for (std::size_t c = 0; c < num_classes_; ++c) score[c] += tree_value(per_class[c], x);
    double mx = score[0];
    for (double s : score) mx = std::max(mx, s);
    double z = 0;
    for (std::size_t c = 0; c < num_classes_; ++c) {
        out[c] = std::exp(score[c] - mx);
        z += out[c];
    }
    for (std::size_t c = 0; c < num_classes_; ++c) out[c] /= z;
}

nlohmann::ordered_json HistGbdtClassifier::to_json() const {
    nlohmann::ordered_json j;
    j["type"] = "hist_gradient_boosting";
    j["classes"] = num_classes_;
    j["features"] = num_features_;
    j["learning_rate"] = learning_rate_;
    j["base_score"] = base_score_;
    auto rounds = nlohmann::ordered_json::array();
    for (const auto& per_class : trees_) {
        auto jc = nlohmann::ordered_json::array();
        for (const auto& tree : per_class) {
            auto jt = nlohmann::ordered_json::array();
            for (const auto& n : tree) {
                nlohmann::ordered_json jn;
                jn["f"] = n.feature;
                jn["t"] = n.threshold;
                jn["l"] = n.left;
                jn["r"] = n.right;
                jn["v"] = n.value;
                jt.push_back(std::move(jn));
            }
            jc.push_back(std::move(jt));
        }
        rounds.push_back(std::move(jc));
    }
    j["rounds"] = std::move(rounds);
    return j;
}

HistGbdtClassifier HistGbdtClassifier::from_json(const nlohmann::json& j) {
    HistGbdtClassifier m;
    m.num_classes_ = j.at("classes").get<std::size_t>();
    m.num_features_ = j.at("features").get<std::size_t>();
    m.learning_rate_ = j.at("learning_rate").get<double>();
    m.base_score_ = j.at("base_score").get<std::vector<double>>();
    for (const auto& jc : j.at("rounds")) {
        std::vector<Tree> per_class;
        for (const auto& jt : jc) {
            Tree tree;
            for (const auto& jn : jt) {
                TreeNode n;
                n.feature = jn.at("f").get<int>();
                n.threshold = jn.at("t").get<double>();
                n.left = jn.at("l").get<std::int32_t>();
                n.right = jn.at("r").get<std::int32_t>();
                n.value = jn.at("v").get<double>();
                tree.push_back(n);
            }
            per_class.push_back(std::move(tree));
        }
        m.trees_.push_back(std::move(per_class));
    }
    return m;
}

}  // namespace trajml
