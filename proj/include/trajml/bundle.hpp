#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trajml/ensemble.hpp"
#include "trajml/trajectory.hpp"

namespace trajml {

// Versioned JSON envelope: ensemble member states (base64), weights, class
// vocabulary, feature schema, a training summary, and a 10-row probe set
// with its stored predictions for load-time self-verification.
struct ModelBundle {
    static constexpr int format_version = 1;

    std::string space_hash;
    EnsembleModel ensemble;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
    WindowSpec window;
    nlohmann::ordered_json training_summary;  // trace digest, contribution table, report

    std::vector<double> probe_features;  // probe_rows x d
    std::size_t probe_rows = 0;
    std::vector<int> probe_predictions;

    void save(const std::string& path) const;
    // Verifies the probe set reproduces stored predictions; throws E_VERSION
    // on format or ConfigSpace hash mismatch, E_DATA on probe mismatch.
    static ModelBundle load(const std::string& path, const ConfigSpace& space);

    std::string serialize() const;
};

std::string base64_encode(const std::string& bytes);
std::string base64_decode(const std::string& text);

}  // namespace trajml
