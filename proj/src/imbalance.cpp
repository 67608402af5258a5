#include "trajml/imbalance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trajml/error.hpp"
#include "trajml/random.hpp"

namespace trajml {

std::string to_string(BalancingKind k) {
    switch (k) {
        case BalancingKind::None: return "none";
        case BalancingKind::Weighting: return "weighting";
        case BalancingKind::Smote: return "smote";
        case BalancingKind::Undersample: return "undersample";
    }
    return "none";
}

BalancingKind balancing_from_string(const std::string& s) {
    if (s == "none") return BalancingKind::None;
    if (s == "weighting") return BalancingKind::Weighting;
    if (s == "smote") return BalancingKind::Smote;
    if (s == "undersample") return BalancingKind::Undersample;
    throw space_error("unknown balancing strategy '" + s + "'");
}

ClassWeights class_weights(const ClassDistribution& dist) {
    const double n = static_cast<double>(dist.total);
    const double c = static_cast<double>(dist.counts.size());
    ClassWeights out;
    out.w.reserve(dist.counts.size());
    for (std::size_t i = 0; i < dist.counts.size(); ++i) {
        if (dist.counts[i] == 0)
            throw data_error("class " + std::to_string(i) + " has zero samples");
        out.w.push_back(n / (c * static_cast<double>(dist.counts[i])));
    }
    return out;
}

double weighted_cross_entropy(const ClassWeights& weights, int true_label,
                              std::span<const double> predicted) {
    if (true_label < 0 || static_cast<std::size_t>(true_label) >= predicted.size())
        throw contract_error("true_label out of range");
    double sum = 0;
    for (double p : predicted) {
        if (p < 0) throw contract_error("negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw contract_error("prediction does not sum to 1");
    const double p = std::max(predicted[static_cast<std::size_t>(true_label)], 1e-12);
    return -weights.w[static_cast<std::size_t>(true_label)] * std::log(p);
}

LabeledDataset smote_oversample(const LabeledDataset& ds, int k, std::uint64_t seed,
                                bool allow_degenerate_jitter) {
    if (k < 1) throw contract_error("smote k must be >= 1");
    auto dist = class_distribution(ds);
    const std::size_t majority = *std::max_element(dist.counts.begin(), dist.counts.end());

    std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
    for (std::size_t i = 0; i < ds.rows; ++i)
        by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);

    // feature std per column, for the degenerate-class jitter fallback
    std::vector<double> col_std;
    if (allow_degenerate_jitter) {
        col_std.assign(ds.cols, 0.0);
        std::vector<double> mean(ds.cols, 0.0);
        for (std::size_t i = 0; i < ds.rows; ++i)
            for (std::size_t j = 0; j < ds.cols; ++j) mean[j] += ds.at(i, j);
        for (auto& m : mean) m /= static_cast<double>(std::max<std::size_t>(ds.rows, 1));
        for (std::size_t i = 0; i < ds.rows; ++i)
            for (std::size_t j = 0; j < ds.cols; ++j) {
                double d = ds.at(i, j) - mean[j];
                col_std[j] += d * d;
            }
        for (auto& s : col_std) s = std::sqrt(s / static_cast<double>(std::max<std::size_t>(ds.rows, 1)));
    }

    LabeledDataset out = ds;  // originals preserved, synthetics appended
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        const auto& members = by_class[c];
        if (members.size() == 0 || members.size() >= majority) continue;
        auto rng = make_rng(seed, c);
        std::size_t needed = majority - members.size();

        if (members.size() == 1) {
            if (!allow_degenerate_jitter)
                throw data_error("class '" + ds.class_names[c] +
                                 "' has a single sample; SMOTE needs >= 2");
            std::normal_distribution<double> gauss(0.0, 1.0);
            for (std::size_t s = 0; s < needed; ++s) {
                auto base = ds.row(members[0]);
                for (std::size_t j = 0; j < ds.cols; ++j)
                    out.features.push_back(base[j] + 1e-3 * col_std[j] * gauss(rng));
                out.labels.push_back(static_cast<int>(c));
                ++out.rows;
            }
            continue;
        }

        const std::size_t k_eff = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                        members.size() - 1);
        // same-class k nearest neighbors, brute force
        std::vector<std::vector<std::size_t>> nn(members.size());
        for (std::size_t a = 0; a < members.size(); ++a) {
            std::vector<std::pair<double, std::size_t>> d;
            d.reserve(members.size() - 1);
            for (std::size_t b = 0; b < members.size(); ++b) {
                if (a == b) continue;
                double dd = 0;
                auto ra = ds.row(members[a]), rb = ds.row(members[b]);
                for (std::size_t j = 0; j < ds.cols; ++j) {
                    double diff = ra[j] - rb[j];
                    dd += diff * diff;
                }
                d.emplace_back(dd, b);
            }
            std::sort(d.begin(), d.end());
            for (std::size_t t = 0; t < k_eff; ++t) nn[a].push_back(d[t].second);
        }

        std::uniform_int_distribution<std::size_t> pick_base(0, members.size() - 1);
        std::uniform_int_distribution<std::size_t> pick_nn(0, k_eff - 1);
        std::uniform_real_distribution<double> lambda(0.0, 1.0);
        for (std::size_t s = 0; s < needed; ++s) {
            std::size_t a = pick_base(rng);
            std::size_t b = nn[a][pick_nn(rng)];
            double lam = lambda(rng);
            auto ra = ds.row(members[a]), rb = ds.row(members[b]);
            for (std::size_t j = 0; j < ds.cols; ++j)
                out.features.push_back(ra[j] + lam * (rb[j] - ra[j]));
            out.labels.push_back(static_cast<int>(c));
            ++out.rows;
        }
    }
    return out;
}

LabeledDataset random_undersample(const LabeledDataset& ds, double target_ratio,
                                  std::uint64_t seed) {
    if (target_ratio <= 0.0 || target_ratio > 1.0)
        throw contract_error("target_ratio must be in (0, 1]");
    auto dist = class_distribution(ds);
    std::size_t minority = SIZE_MAX;
    for (std::size_t c : dist.counts)
        if (c > 0) minority = std::min(minority, c);
    if (minority == SIZE_MAX) return ds;
    const auto target = static_cast<std::size_t>(
        std::ceil(target_ratio * static_cast<double>(minority)));
    if (target < 1) throw contract_error("undersample target below 1 sample per class");

    std::vector<std::vector<std::size_t>> by_class(ds.num_classes());
    for (std::size_t i = 0; i < ds.rows; ++i)
        by_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);

    std::vector<std::size_t> kept;
    for (std::size_t c = 0; c < by_class.size(); ++c) {
        auto& members = by_class[c];
        if (members.size() > target) {
            auto rng = make_rng(seed, c);
            std::shuffle(members.begin(), members.end(), rng);
            members.resize(target);
            std::sort(members.begin(), members.end());
        }
        kept.insert(kept.end(), members.begin(), members.end());
    }
    std::sort(kept.begin(), kept.end());
    return ds.select_rows(kept);
}

LabeledDataset apply_balancing(const LabeledDataset& ds, const BalancingStrategy& strategy,
                               std::uint64_t seed) {
    switch (strategy.kind) {
        case BalancingKind::Smote:
            return smote_oversample(ds, strategy.smote_k, seed, strategy.allow_degenerate_jitter);
        case BalancingKind::Undersample:
            return random_undersample(ds, strategy.target_ratio, seed);
        case BalancingKind::None:
        case BalancingKind::Weighting:
            return ds;  // weighting is handled at fit time via class weights
    }
    return ds;
}

}  // namespace trajml
