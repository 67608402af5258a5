#include "trajml/metalearn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "trajml/error.hpp"

namespace trajml {

std::vector<double> MetaFeatures::as_vector() const {
    return {n_samples,       n_features,       n_classes,     class_entropy,
            imbalance_ratio, feature_mean_std, log_n_samples, log_n_features};
}

MetaFeatures compute_meta_features(const LabeledDataset& ds) {
    if (ds.rows == 0) throw data_error("cannot compute meta-features of an empty dataset");
    auto dist = class_distribution(ds);
    std::size_t present = 0, max_c = 0, min_c = SIZE_MAX;
    double entropy = 0;
    for (std::size_t c : dist.counts) {
        if (c == 0) continue;
        ++present;
        max_c = std::max(max_c, c);
        min_c = std::min(min_c, c);
        const double p = static_cast<double>(c) / static_cast<double>(dist.total);
        entropy -= p * std::log(p);
    }
    if (present < 2) throw data_error("meta-features require at least 2 classes present");

    MetaFeatures mf;
    mf.n_samples = static_cast<double>(ds.rows);
    mf.n_features = static_cast<double>(ds.cols);
    mf.n_classes = static_cast<double>(present);
    mf.class_entropy = entropy;
    mf.imbalance_ratio = static_cast<double>(max_c) / static_cast<double>(min_c);
    double std_sum = 0;
    for (std::size_t j = 0; j < ds.cols; ++j) {
        double mean = 0;
        for (std::size_t i = 0; i < ds.rows; ++i) mean += ds.at(i, j);
        mean /= static_cast<double>(ds.rows);
        double var = 0;
        for (std::size_t i = 0; i < ds.rows; ++i) {
            const double d = ds.at(i, j) - mean;
            var += d * d;
        }
        std_sum += std::sqrt(var / static_cast<double>(ds.rows));
    }
    mf.feature_mean_std = std_sum / static_cast<double>(ds.cols);
    mf.log_n_samples = std::log(mf.n_samples);
    mf.log_n_features = std::log(mf.n_features);
    return mf;
}

void KnowledgeBase::recompute_normalization() {
    feature_mean.assign(MetaFeatures::dim, 0.0);
    feature_std.assign(MetaFeatures::dim, 0.0);
    if (entries.empty()) return;
    for (const auto& e : entries) {
        auto v = e.meta.as_vector();
        for (std::size_t j = 0; j < MetaFeatures::dim; ++j) feature_mean[j] += v[j];
    }
    for (auto& m : feature_mean) m /= static_cast<double>(entries.size());
    for (const auto& e : entries) {
        auto v = e.meta.as_vector();
        for (std::size_t j = 0; j < MetaFeatures::dim; ++j) {
            const double d = v[j] - feature_mean[j];
            feature_std[j] += d * d;
        }
    }
    for (auto& s : feature_std) s = std::sqrt(s / static_cast<double>(entries.size()));
}

namespace {

nlohmann::ordered_json meta_to_json(const MetaFeatures& mf) {
    nlohmann::ordered_json j;
    j["n_samples"] = mf.n_samples;
    j["n_features"] = mf.n_features;
    j["n_classes"] = mf.n_classes;
    j["class_entropy"] = mf.class_entropy;
    j["imbalance_ratio"] = mf.imbalance_ratio;
    j["feature_mean_std"] = mf.feature_mean_std;
    j["log_n_samples"] = mf.log_n_samples;
    j["log_n_features"] = mf.log_n_features;
    return j;
}

MetaFeatures meta_from_json(const nlohmann::json& j) {
    MetaFeatures mf;
    mf.n_samples = j.at("n_samples").get<double>();
    mf.n_features = j.at("n_features").get<double>();
    mf.n_classes = j.at("n_classes").get<double>();
    mf.class_entropy = j.at("class_entropy").get<double>();
    mf.imbalance_ratio = j.at("imbalance_ratio").get<double>();
    mf.feature_mean_std = j.at("feature_mean_std").get<double>();
    mf.log_n_samples = j.at("log_n_samples").get<double>();
    mf.log_n_features = j.at("log_n_features").get<double>();
    return mf;
}

}  // namespace

nlohmann::ordered_json KnowledgeBase::to_json() const {
    nlohmann::ordered_json j;
    j["format"] = "trajml-kb-v1";
    j["space_hash"] = space_hash;
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        nlohmann::ordered_json je;
        je["dataset_id"] = e.dataset_id;
        je["meta"] = meta_to_json(e.meta);
        auto cfgs = nlohmann::ordered_json::array();
        for (const auto& [cfg, loss] : e.top_configs) {
            nlohmann::ordered_json jc;
            jc["config"] = cfg.to_json();
            jc["mean_loss"] = loss;
            cfgs.push_back(std::move(jc));
        }
        je["top_configs"] = std::move(cfgs);
        arr.push_back(std::move(je));
    }
    j["entries"] = std::move(arr);
    j["feature_mean"] = feature_mean;
    j["feature_std"] = feature_std;
    return j;
}

KnowledgeBase KnowledgeBase::from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j.at("format").get<std::string>() != "trajml-kb-v1")
        throw version_error("unrecognized knowledge base format");
    KnowledgeBase kb;
    kb.space_hash = j.at("space_hash").get<std::string>();
    for (const auto& je : j.at("entries")) {
        KnowledgeBaseEntry e;
        e.dataset_id = je.at("dataset_id").get<std::string>();
        e.meta = meta_from_json(je.at("meta"));
        for (const auto& jc : je.at("top_configs"))
            e.top_configs.emplace_back(Configuration::from_json(jc.at("config")),
                                       jc.at("mean_loss").get<double>());
        kb.entries.push_back(std::move(e));
    }
    kb.feature_mean = j.at("feature_mean").get<std::vector<double>>();
    kb.feature_std = j.at("feature_std").get<std::vector<double>>();
    return kb;
}

void KnowledgeBase::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write knowledge base: " + path);
    out << to_json().dump(2) << '\n';
}

KnowledgeBase KnowledgeBase::load(const std::string& path, const ConfigSpace& space) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open knowledge base: " + path);
    nlohmann::json j;
    in >> j;
    KnowledgeBase kb = from_json(j);
    if (kb.space_hash != space.version_hash())
        throw version_error("knowledge base was built for a different configuration space (hash " +
                            kb.space_hash + " vs " + space.version_hash() + "); rebuild it");
    return kb;
}

KnowledgeBase build_knowledge_base(
    const std::vector<std::pair<std::string, LabeledDataset>>& datasets, const ConfigSpace& space,
    const BudgetSpec& budget_per_dataset, Metric metric, std::size_t configs_per_dataset) {
    if (datasets.empty()) throw data_error("need at least one dataset to build a knowledge base");
    KnowledgeBase kb;
    kb.space_hash = space.version_hash();
    for (const auto& [id, ds] : datasets) {
        KnowledgeBaseEntry entry;
        entry.dataset_id = id;
        try {
            entry.meta = compute_meta_features(ds);
            CashResult res = run_cash(ds, space, budget_per_dataset, {}, metric, 0);
            std::vector<const EvaluationRecord*> complete;
            for (const auto& rec : res.trace)
                if (rec.status == EvalStatus::Complete) complete.push_back(&rec);
            std::stable_sort(complete.begin(), complete.end(),
                             [](const auto* a, const auto* b) { return a->mean_loss < b->mean_loss; });
            std::set<std::string> seen;
            for (const auto* rec : complete) {
                if (entry.top_configs.size() >= configs_per_dataset) break;
                const std::string key = rec->config.to_json().dump();
                if (!seen.insert(key).second) continue;
                entry.top_configs.emplace_back(rec->config, rec->mean_loss);
            }
        } catch (const Error& e) {
            throw Error(e.code(), "dataset '" + id + "': " + e.what());
        }
        kb.entries.push_back(std::move(entry));
    }
    kb.recompute_normalization();
    return kb;
}

std::vector<Configuration> warmstart_select(const KnowledgeBase& kb, const MetaFeatures& mf,
                                            std::size_t k_datasets) {
    if (kb.entries.empty()) throw data_error("knowledge base is empty");
    if (k_datasets < 1) throw contract_error("k_datasets must be >= 1");

    auto z_normalize = [&](const std::vector<double>& raw) {
        std::vector<double> z(raw.size());
        for (std::size_t j = 0; j < raw.size(); ++j) {
            const double s = kb.feature_std[j] > 1e-12 ? kb.feature_std[j] : 1.0;
            z[j] = (raw[j] - kb.feature_mean[j]) / s;
        }
        return z;
    };

    const auto q = z_normalize(mf.as_vector());
    std::vector<std::pair<double, std::size_t>> by_distance;
    for (std::size_t i = 0; i < kb.entries.size(); ++i) {
        const auto v = z_normalize(kb.entries[i].meta.as_vector());
        double d = 0;
        for (std::size_t j = 0; j < q.size(); ++j) d += (q[j] - v[j]) * (q[j] - v[j]);
        by_distance.emplace_back(std::sqrt(d), i);
    }
    std::stable_sort(by_distance.begin(), by_distance.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    if (by_distance.size() > k_datasets) by_distance.resize(k_datasets);

    std::vector<Configuration> out;
    std::set<std::string> seen;
    for (const auto& [dist, i] : by_distance) {
        auto donors = kb.entries[i].top_configs;
        std::stable_sort(donors.begin(), donors.end(),
                         [](const auto& a, const auto& b) { return a.second < b.second; });
        for (const auto& [cfg, loss] : donors) {
            const std::string key = cfg.to_json().dump();
            if (seen.insert(key).second) out.push_back(cfg);
        }
    }
    return out;
}

}  // namespace trajml
