#include "trajml/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "trajml/error.hpp"

namespace trajml {

void LabeledDataset::validate() const {
    if (features.size() != rows * cols)
        throw data_error("feature matrix size mismatch");
    if (labels.size() != rows)
        throw data_error("label count != row count");
    for (double v : features)
        if (!std::isfinite(v)) throw data_error("non-finite feature value");
    const int c = static_cast<int>(class_names.size());
    for (int y : labels)
        if (y < 0 || y >= c) throw data_error("label out of range [0, C)");
    if (!feature_names.empty() && feature_names.size() != cols)
        throw data_error("feature name count != column count");
}

LabeledDataset LabeledDataset::select_rows(const std::vector<std::size_t>& idx) const {
    LabeledDataset out;
    out.rows = idx.size();
    out.cols = cols;
    out.class_names = class_names;
    out.feature_names = feature_names;
    out.features.reserve(idx.size() * cols);
    out.labels.reserve(idx.size());
    for (std::size_t i : idx) {
        auto r = row(i);
        out.features.insert(out.features.end(), r.begin(), r.end());
        out.labels.push_back(labels[i]);
    }
    return out;
}

ClassDistribution class_distribution(const LabeledDataset& ds) {
    ClassDistribution dist;
    dist.counts.assign(ds.num_classes(), 0);
    for (int y : ds.labels) ++dist.counts[static_cast<std::size_t>(y)];
    dist.total = ds.rows;
    return dist;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw parse_error("line " + std::to_string(line_no) + ": bad numeric field '" + s + "'");
    return v;
}

}  // namespace

LabeledDataset load_dataset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open dataset file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty dataset file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "label" || header.front() != "f0")
        throw schema_error("expected header f0,...,f{d-1},label in " + path);

    LabeledDataset ds;
    ds.cols = header.size() - 1;
    ds.feature_names.assign(header.begin(), header.end() - 1);

    std::map<std::string, int> class_ids;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw parse_error("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        for (std::size_t j = 0; j + 1 < fields.size(); ++j)
            ds.features.push_back(parse_double(fields[j], line_no));
        const std::string& name = fields.back();
        auto it = class_ids.find(name);
        if (it == class_ids.end()) {
            it = class_ids.emplace(name, static_cast<int>(ds.class_names.size())).first;
            ds.class_names.push_back(name);
        }
        ds.labels.push_back(it->second);
        ++ds.rows;
    }
    ds.validate();
    return ds;
}

void save_dataset_csv(const LabeledDataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot write dataset file: " + path);
    for (std::size_t j = 0; j < ds.cols; ++j) out << 'f' << j << ',';
    out << "label\n";
    out.precision(17);
    for (std::size_t i = 0; i < ds.rows; ++i) {
        for (std::size_t j = 0; j < ds.cols; ++j) out << ds.at(i, j) << ',';
        out << ds.class_names[static_cast<std::size_t>(ds.labels[i])] << '\n';
    }
}

}  // namespace trajml
