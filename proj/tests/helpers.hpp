#pragma once

#include <unistd.h>

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "trajml/dataset.hpp"
#include "trajml/random.hpp"

namespace testutil {

// Unique temp file that removes itself.
struct TempFile {
    std::filesystem::path path;

    explicit TempFile(const std::string& name_hint, const std::string& content = "") {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("trajml_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++) + "_" + name_hint);
        if (!content.empty()) {
            std::ofstream out(path);
            out << content;
        }
    }
    ~TempFile() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string str() const { return path.string(); }
};

// Two interleaved Gaussian blobs per class, optionally imbalanced.
inline trajml::LabeledDataset make_blobs(const std::vector<std::size_t>& counts,
                                         std::size_t cols, double spread,
                                         std::uint64_t seed) {
    trajml::LabeledDataset ds;
    ds.cols = cols;
    auto rng = trajml::make_rng(seed);
    std::normal_distribution<double> noise(0.0, spread);
    for (std::size_t c = 0; c < counts.size(); ++c) {
        ds.class_names.push_back("class" + std::to_string(c));
        for (std::size_t i = 0; i < counts[c]; ++i) {
            for (std::size_t j = 0; j < cols; ++j)
                ds.features.push_back(static_cast<double>(c) * 3.0 + noise(rng));
            ds.labels.push_back(static_cast<int>(c));
            ++ds.rows;
        }
    }
    return ds;
}

// Axis-separable dataset: class = number of features above 0.5, so a shallow
// tree reaches zero training loss.
inline trajml::LabeledDataset make_separable(std::size_t rows_per_class,
                                             std::size_t num_classes,
                                             std::uint64_t seed) {
    trajml::LabeledDataset ds;
    ds.cols = 2;
    for (std::size_t c = 0; c < num_classes; ++c)
        ds.class_names.push_back("class" + std::to_string(c));
    auto rng = trajml::make_rng(seed);
    std::uniform_real_distribution<double> jitter(0.05, 0.45);
    for (std::size_t c = 0; c < num_classes; ++c) {
        for (std::size_t i = 0; i < rows_per_class; ++i) {
            // class c occupies the band x0 in [c, c + 0.45]
            ds.features.push_back(static_cast<double>(c) + jitter(rng));
            ds.features.push_back(jitter(rng));
            ds.labels.push_back(static_cast<int>(c));
            ++ds.rows;
        }
    }
    return ds;
}

}  // namespace testutil
