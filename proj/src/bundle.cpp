#include "trajml/bundle.hpp"

#include <cmath>
#include <fstream>

#include "trajml/error.hpp"

namespace trajml {

namespace {
constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
}

std::string base64_encode(const std::string& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 2 < bytes.size()) {
        const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                           (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                           static_cast<unsigned char>(bytes[i + 2]);
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += kAlphabet[v & 63];
        i += 3;
    }
    const std::size_t rem = bytes.size() - i;
    if (rem == 1) {
        const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += "==";
    } else if (rem == 2) {
        const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                           (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out += kAlphabet[(v >> 18) & 63];
        out += kAlphabet[(v >> 12) & 63];
        out += kAlphabet[(v >> 6) & 63];
        out += '=';
    }
    return out;
}

std::string base64_decode(const std::string& text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::string out;
    int buffer = 0, bits = 0;
    for (char c : text) {
        if (c == '=') break;
        const int v = value_of(c);
        if (v < 0) throw parse_error("invalid base64 character");
        buffer = (buffer << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out += static_cast<char>((buffer >> bits) & 0xff);
        }
    }
    return out;
}

std::string ModelBundle::serialize() const {
    nlohmann::ordered_json j;
    j["format"] = "trajml-bundle";
    j["version"] = format_version;
    j["space_hash"] = space_hash;
    j["class_names"] = class_names;
    j["feature_names"] = feature_names;
    j["window"] = {{"window_len", window.window_len},
                   {"stride", window.stride},
                   {"label_rule",
                    window.label_rule == WindowLabelRule::Majority ? "majority" : "center"}};

    auto members = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < ensemble.members.size(); ++k) {
        const auto& m = ensemble.members[k];
        nlohmann::ordered_json jm;
        jm["algorithm"] = to_string(m.algorithm);
        jm["config"] = m.config.to_json();
        jm["weight"] = ensemble.weights[k];
        jm["state"] = base64_encode(serialize_model(*m.model));
        members.push_back(std::move(jm));
    }
    j["members"] = std::move(members);
    j["validation_loss"] = ensemble.validation_loss;
    j["training_summary"] = training_summary;

    j["probe"] = {{"rows", probe_rows},
                  {"features", probe_features},
                  {"predictions", probe_predictions}};
    return j.dump();
}

void ModelBundle::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot write bundle: " + path);
    out << serialize() << '\n';
}

ModelBundle ModelBundle::load(const std::string& path, const ConfigSpace& space) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open bundle: " + path);
    nlohmann::ordered_json j;  // preserve key order so reserialization is byte-identical
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("bundle is not valid JSON: ") + e.what());
    }
    if (!j.contains("format") || j.at("format").get<std::string>() != "trajml-bundle")
        throw version_error("not a model bundle: " + path);
    if (j.at("version").get<int>() != format_version)
        throw version_error("unsupported bundle version");

    ModelBundle b;
    b.space_hash = j.at("space_hash").get<std::string>();
    if (b.space_hash != space.version_hash())
        throw version_error("bundle was built for a different configuration space");
    b.class_names = j.at("class_names").get<std::vector<std::string>>();
    b.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    b.window.window_len = j.at("window").at("window_len").get<std::size_t>();
    b.window.stride = j.at("window").at("stride").get<std::size_t>();
    b.window.label_rule = j.at("window").at("label_rule").get<std::string>() == "majority"
                              ? WindowLabelRule::Majority
                              : WindowLabelRule::Center;

    for (const auto& jm : j.at("members")) {
        TrainedModel m;
        m.algorithm = algorithm_from_string(jm.at("algorithm").get<std::string>());
        m.config = Configuration::from_json(jm.at("config"));
        const std::string state = base64_decode(jm.at("state").get<std::string>());
        m.model = deserialize_model(state);
        m.class_count = m.model->num_classes();
        m.size_bytes = state.size();
        b.ensemble.members.push_back(std::move(m));
        b.ensemble.weights.push_back(jm.at("weight").get<double>());
    }
    b.ensemble.validation_loss = j.at("validation_loss").get<double>();
    b.training_summary = j.at("training_summary");

    b.probe_rows = j.at("probe").at("rows").get<std::size_t>();
    b.probe_features = j.at("probe").at("features").get<std::vector<double>>();
    b.probe_predictions = j.at("probe").at("predictions").get<std::vector<int>>();

    // self-verification: the loaded ensemble must reproduce the stored probe
    // predictions exactly
    if (b.probe_rows > 0) {
        const std::size_t d = b.feature_names.size();
        auto proba = ensemble_predict_proba(b.ensemble, b.probe_features.data(), b.probe_rows, d);
        auto pred = argmax_labels(proba, b.probe_rows, b.ensemble.num_classes());
        if (pred != b.probe_predictions)
            throw data_error("bundle self-verification failed: probe predictions differ");
    }
    return b;
}

}  // namespace trajml
