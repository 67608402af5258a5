#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace trajml {

enum class AlgorithmId { DecisionTree, RandomForest, Knn, HistGradientBoosting };

std::string to_string(AlgorithmId id);
AlgorithmId algorithm_from_string(const std::string& s);
const std::vector<AlgorithmId>& all_algorithms();

using ParamValue = std::variant<std::int64_t, double, std::string>;

struct ParamDef {
    enum class Kind { IntRange, RealRange, Categorical };

    std::string name;
    Kind kind = Kind::Categorical;
    bool log_scale = false;          // numeric kinds only
    double lo = 0.0, hi = 0.0;       // inclusive bounds for numeric kinds
    std::vector<std::string> choices;
    ParamValue default_value;

    bool contains(const ParamValue& v) const;
    ParamValue sample(std::uint64_t seed) const;
    // Local move: numeric params step in the (log-)normalized domain,
    // categoricals jump to a different choice.
    ParamValue mutate(const ParamValue& v, std::uint64_t seed) const;
    // Min-max scaling to [0,1]; log-scaled params are scaled in log domain.
    double encode(const ParamValue& v) const;  // numeric kinds only
};

struct HyperparameterSpace {
    std::vector<ParamDef> params;

    const ParamDef* find(const std::string& name) const;
};

struct Configuration {
    AlgorithmId algorithm = AlgorithmId::DecisionTree;
    std::map<std::string, ParamValue> values;  // active params only

    std::int64_t get_int(const std::string& name) const;
    double get_real(const std::string& name) const;
    const std::string& get_cat(const std::string& name) const;

    nlohmann::ordered_json to_json() const;
    static Configuration from_json(const nlohmann::json& j);

    bool operator==(const Configuration& other) const = default;
};

// Joint CASH search space: root `algorithm` categorical, per-algorithm
// conditional subspaces, and the shared `balancing` categorical.
struct ConfigSpace {
    std::vector<std::pair<AlgorithmId, HyperparameterSpace>> subspaces;
    ParamDef balancing;

    const HyperparameterSpace& subspace(AlgorithmId id) const;

    // Throws E_SPACE listing offending params when cfg is invalid.
    void validate(const Configuration& cfg) const;

    Configuration sample(std::uint64_t seed) const;
    Configuration mutate(const Configuration& cfg, std::uint64_t seed) const;

    // Fixed-length encoding independent of the active algorithm: categoricals
    // one-hot, numerics min-max scaled, inactive slots filled with -1.
    std::vector<double> encode(const Configuration& cfg) const;
    std::size_t encoded_dim() const;

    // FNV-1a hash over the canonical space description; persisted artifacts
    // (knowledge base, model bundle) carry it to detect schema drift.
    std::string version_hash() const;
};

ConfigSpace default_config_space();

}  // namespace trajml
