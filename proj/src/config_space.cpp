#include "trajml/config_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "trajml/error.hpp"
#include "trajml/random.hpp"

namespace trajml {

std::string to_string(AlgorithmId id) {
    switch (id) {
        case AlgorithmId::DecisionTree: return "decision_tree";
        case AlgorithmId::RandomForest: return "random_forest";
        case AlgorithmId::Knn: return "knn";
        case AlgorithmId::HistGradientBoosting: return "hist_gradient_boosting";
    }
    return "decision_tree";
}

AlgorithmId algorithm_from_string(const std::string& s) {
    if (s == "decision_tree") return AlgorithmId::DecisionTree;
    if (s == "random_forest") return AlgorithmId::RandomForest;
    if (s == "knn") return AlgorithmId::Knn;
    if (s == "hist_gradient_boosting") return AlgorithmId::HistGradientBoosting;
    throw space_error("unknown algorithm '" + s + "'");
}

const std::vector<AlgorithmId>& all_algorithms() {
    static const std::vector<AlgorithmId> ids = {
        AlgorithmId::DecisionTree, AlgorithmId::RandomForest, AlgorithmId::Knn,
        AlgorithmId::HistGradientBoosting};
    return ids;
}

namespace {

double numeric_value(const ParamValue& v) {
    if (std::holds_alternative<std::int64_t>(v))
        return static_cast<double>(std::get<std::int64_t>(v));
    return std::get<double>(v);
}

nlohmann::ordered_json value_to_json(const ParamValue& v) {
    if (std::holds_alternative<std::int64_t>(v)) return std::get<std::int64_t>(v);
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    return std::get<std::string>(v);
}

}  // namespace

bool ParamDef::contains(const ParamValue& v) const {
    switch (kind) {
        case Kind::IntRange: {
            if (!std::holds_alternative<std::int64_t>(v)) return false;
            const double d = numeric_value(v);
            return d >= lo && d <= hi;
        }
        case Kind::RealRange: {
            if (!std::holds_alternative<double>(v)) return false;
            const double d = std::get<double>(v);
            return d >= lo && d <= hi;
        }
        case Kind::Categorical:
            return std::holds_alternative<std::string>(v) &&
                   std::find(choices.begin(), choices.end(), std::get<std::string>(v)) !=
                       choices.end();
    }
    return false;
}

ParamValue ParamDef::sample(std::uint64_t seed) const {
    auto rng = make_rng(seed);
    switch (kind) {
        case Kind::IntRange: {
            if (log_scale) {
                std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
                auto v = static_cast<std::int64_t>(std::llround(std::exp(u(rng))));
                return std::clamp<std::int64_t>(v, static_cast<std::int64_t>(lo),
                                                static_cast<std::int64_t>(hi));
            }
            std::uniform_int_distribution<std::int64_t> u(static_cast<std::int64_t>(lo),
                                                          static_cast<std::int64_t>(hi));
            return u(rng);
        }
        case Kind::RealRange: {
            if (log_scale) {
                std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
                return std::exp(u(rng));
            }
            std::uniform_real_distribution<double> u(lo, hi);
            return u(rng);
        }
        case Kind::Categorical: {
            std::uniform_int_distribution<std::size_t> u(0, choices.size() - 1);
            return choices[u(rng)];
        }
    }
    return default_value;
}

ParamValue ParamDef::mutate(const ParamValue& v, std::uint64_t seed) const {
    auto rng = make_rng(seed);
    if (kind == Kind::Categorical) {
        if (choices.size() < 2) return v;
        std::uniform_int_distribution<std::size_t> u(0, choices.size() - 2);
        std::size_t pick = u(rng);
        const auto& cur = std::get<std::string>(v);
        std::size_t cur_idx = static_cast<std::size_t>(
            std::find(choices.begin(), choices.end(), cur) - choices.begin());
        if (pick >= cur_idx) ++pick;
        return choices[pick];
    }
    // gaussian step of 0.2 in the normalized (possibly log) domain
    std::normal_distribution<double> gauss(0.0, 0.2);
    const double a = log_scale ? std::log(lo) : lo;
    const double b = log_scale ? std::log(hi) : hi;
    double cur = numeric_value(v);
    double z = ((log_scale ? std::log(cur) : cur) - a) / (b - a);
    z = std::clamp(z + gauss(rng), 0.0, 1.0);
    double raw = a + z * (b - a);
    if (log_scale) raw = std::exp(raw);
    if (kind == Kind::IntRange) {
        auto iv = static_cast<std::int64_t>(std::llround(raw));
        return std::clamp<std::int64_t>(iv, static_cast<std::int64_t>(lo),
                                        static_cast<std::int64_t>(hi));
    }
    return std::clamp(raw, lo, hi);
}

double ParamDef::encode(const ParamValue& v) const {
    const double a = log_scale ? std::log(lo) : lo;
    const double b = log_scale ? std::log(hi) : hi;
    const double cur = numeric_value(v);
    if (b <= a) return 0.0;
    return ((log_scale ? std::log(cur) : cur) - a) / (b - a);
}

const ParamDef* HyperparameterSpace::find(const std::string& name) const {
    for (const auto& p : params)
        if (p.name == name) return &p;
    return nullptr;
}

std::int64_t Configuration::get_int(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw space_error("missing parameter '" + name + "'");
    return std::get<std::int64_t>(it->second);
}

double Configuration::get_real(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw space_error("missing parameter '" + name + "'");
    return std::get<double>(it->second);
}

const std::string& Configuration::get_cat(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw space_error("missing parameter '" + name + "'");
    return std::get<std::string>(it->second);
}

nlohmann::ordered_json Configuration::to_json() const {
    nlohmann::ordered_json j;
    j["algorithm"] = trajml::to_string(algorithm);
    nlohmann::ordered_json vals;
    for (const auto& [name, v] : values) vals[name] = value_to_json(v);
    j["params"] = std::move(vals);
    return j;
}

Configuration Configuration::from_json(const nlohmann::json& j) {
    Configuration cfg;
    cfg.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    for (const auto& [name, v] : j.at("params").items()) {
        if (v.is_number_integer())
            cfg.values[name] = v.get<std::int64_t>();
        else if (v.is_number_float())
            cfg.values[name] = v.get<double>();
        else
            cfg.values[name] = v.get<std::string>();
    }
    return cfg;
}

const HyperparameterSpace& ConfigSpace::subspace(AlgorithmId id) const {
    for (const auto& [alg, sp] : subspaces)
        if (alg == id) return sp;
    throw space_error("no subspace for algorithm " + trajml::to_string(id));
}

void ConfigSpace::validate(const Configuration& cfg) const {
    const auto& sp = subspace(cfg.algorithm);
    std::vector<std::string> problems;
    for (const auto& p : sp.params) {
        auto it = cfg.values.find(p.name);
        if (it == cfg.values.end())
            problems.push_back("missing '" + p.name + "'");
        else if (!p.contains(it->second))
            problems.push_back("'" + p.name + "' out of bounds");
    }
    auto bal = cfg.values.find(balancing.name);
    if (bal == cfg.values.end())
        problems.push_back("missing '" + balancing.name + "'");
    else if (!balancing.contains(bal->second))
        problems.push_back("'" + balancing.name + "' invalid");
    for (const auto& [name, v] : cfg.values) {
        if (name == balancing.name) continue;
        if (!sp.find(name)) problems.push_back("inactive/unknown '" + name + "'");
    }
    if (!problems.empty()) {
        std::string msg = "invalid configuration for " + trajml::to_string(cfg.algorithm) + ":";
        for (const auto& p : problems) msg += " " + p + ";";
        throw space_error(msg);
    }
}

Configuration ConfigSpace::sample(std::uint64_t seed) const {
    auto rng = make_rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, subspaces.size() - 1);
    Configuration cfg;
    cfg.algorithm = subspaces[pick(rng)].first;
    const auto& sp = subspace(cfg.algorithm);
    std::uint64_t stream = 1;
    for (const auto& p : sp.params) cfg.values[p.name] = p.sample(mix_seed(seed, stream++));
    cfg.values[balancing.name] = balancing.sample(mix_seed(seed, stream++));
    return cfg;
}

Configuration ConfigSpace::mutate(const Configuration& cfg, std::uint64_t seed) const {
    auto rng = make_rng(seed);
    // small chance to jump algorithms entirely
    std::uniform_real_distribution<double> u(0.0, 1.0);
    if (u(rng) < 0.1) return sample(mix_seed(seed, 99));

    Configuration out = cfg;
    const auto& sp = subspace(cfg.algorithm);
    std::uniform_int_distribution<std::size_t> pick(0, sp.params.size());  // last = balancing
    const std::size_t which = pick(rng);
    if (which == sp.params.size()) {
        out.values[balancing.name] =
            balancing.mutate(cfg.values.at(balancing.name), mix_seed(seed, 7));
    } else {
        const auto& p = sp.params[which];
        out.values[p.name] = p.mutate(cfg.values.at(p.name), mix_seed(seed, 7));
    }
    return out;
}

std::vector<double> ConfigSpace::encode(const Configuration& cfg) const {
    std::vector<double> v;
    // algorithm one-hot
    for (const auto& [alg, sp] : subspaces) v.push_back(alg == cfg.algorithm ? 1.0 : 0.0);
    // balancing one-hot (always active)
    const auto& bal = cfg.get_cat(balancing.name);
    for (const auto& choice : balancing.choices) v.push_back(choice == bal ? 1.0 : 0.0);
    // per-algorithm slots; inactive ones carry the -1 sentinel
    for (const auto& [alg, sp] : subspaces) {
        const bool active = alg == cfg.algorithm;
        for (const auto& p : sp.params) {
            if (p.kind == ParamDef::Kind::Categorical) {
                for (const auto& choice : p.choices)
                    v.push_back(active ? (cfg.get_cat(p.name) == choice ? 1.0 : 0.0) : -1.0);
            } else {
                v.push_back(active ? p.encode(cfg.values.at(p.name)) : -1.0);
            }
        }
    }
    return v;
}

std::size_t ConfigSpace::encoded_dim() const {
    std::size_t n = subspaces.size() + balancing.choices.size();
    for (const auto& [alg, sp] : subspaces)
        for (const auto& p : sp.params)
            n += p.kind == ParamDef::Kind::Categorical ? p.choices.size() : 1;
    return n;
}

std::string ConfigSpace::version_hash() const {
    std::ostringstream desc;
    for (const auto& [alg, sp] : subspaces) {
        desc << trajml::to_string(alg) << '{';
        for (const auto& p : sp.params) {
            desc << p.name << ':' << static_cast<int>(p.kind) << ':' << p.log_scale << ':'
                 << p.lo << ':' << p.hi;
            for (const auto& c : p.choices) desc << ',' << c;
            desc << ';';
        }
        desc << '}';
    }
    desc << balancing.name;
    for (const auto& c : balancing.choices) desc << ',' << c;

    std::uint64_t hash = 14695981039346656037ULL;
    for (unsigned char ch : desc.str()) {
        hash ^= ch;
        hash *= 1099511628211ULL;
    }
    std::ostringstream out;
    out << std::hex << hash;
    return out.str();
}

ConfigSpace default_config_space() {
    auto int_range = [](std::string name, double lo, double hi, std::int64_t def,
                        bool log_scale = false) {
        ParamDef p;
        p.name = std::move(name);
        p.kind = ParamDef::Kind::IntRange;
        p.log_scale = log_scale;
        p.lo = lo;
        p.hi = hi;
        p.default_value = def;
        return p;
    };
    auto real_range = [](std::string name, double lo, double hi, double def,
                         bool log_scale = false) {
        ParamDef p;
        p.name = std::move(name);
        p.kind = ParamDef::Kind::RealRange;
        p.log_scale = log_scale;
        p.lo = lo;
        p.hi = hi;
        p.default_value = def;
        return p;
    };
    auto categorical = [](std::string name, std::vector<std::string> choices, std::string def) {
        ParamDef p;
        p.name = std::move(name);
        p.kind = ParamDef::Kind::Categorical;
        p.choices = std::move(choices);
        p.default_value = std::move(def);
        return p;
    };

    ConfigSpace space;
    space.balancing = categorical("balancing", {"none", "weighting", "smote", "undersample"},
                                  "weighting");

    HyperparameterSpace dt;
    dt.params = {int_range("max_depth", 1, 32, 12),
                 int_range("min_samples_leaf", 1, 32, 1),
                 categorical("criterion", {"gini", "entropy"}, "gini")};
    space.subspaces.emplace_back(AlgorithmId::DecisionTree, std::move(dt));

    HyperparameterSpace rf;
    rf.params = {int_range("n_trees", 16, 512, 128, true),
                 int_range("max_depth", 2, 32, 16),
                 real_range("max_features_fraction", 0.1, 1.0, 0.5),
                 int_range("min_samples_leaf", 1, 16, 1)};
    space.subspaces.emplace_back(AlgorithmId::RandomForest, std::move(rf));

    HyperparameterSpace knn;
    knn.params = {int_range("k", 1, 50, 5),
                  categorical("weighting", {"uniform", "inverse_distance"}, "uniform"),
                  categorical("metric", {"euclidean", "manhattan"}, "euclidean")};
    space.subspaces.emplace_back(AlgorithmId::Knn, std::move(knn));

    HyperparameterSpace hgb;
    hgb.params = {int_range("n_rounds", 32, 512, 128, true),
                  real_range("learning_rate", 0.01, 0.5, 0.1, true),
                  int_range("max_bins", 16, 255, 64),
                  int_range("max_leaf_nodes", 4, 64, 31),
                  real_range("l2", 1e-6, 1.0, 1e-3, true)};
    space.subspaces.emplace_back(AlgorithmId::HistGradientBoosting, std::move(hgb));

    return space;
}

}  // namespace trajml
