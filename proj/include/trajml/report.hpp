#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "trajml/imbalance.hpp"

namespace trajml {

struct ConfusionMatrix {
    std::size_t num_classes = 0;
    std::vector<std::size_t> counts;  // row = true class, column = predicted

    std::size_t at(std::size_t t, std::size_t p) const { return counts[t * num_classes + p]; }
    std::size_t total() const;
};

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          std::size_t num_classes);

struct ClassMetrics {
    double precision = 0, recall = 0, f1 = 0;
    std::size_t support = 0;
    bool zero_division = false;  // flagged when a denominator was zero
};

struct ClassificationReport {
    std::vector<ClassMetrics> per_class;
    double accuracy = 0;
    double macro_precision = 0, macro_recall = 0, macro_f1 = 0;
    double weighted_precision = 0, weighted_recall = 0, weighted_f1 = 0;
    std::size_t total_support = 0;
};

ClassificationReport classification_report(const ConfusionMatrix& cm);

double balanced_accuracy(const ConfusionMatrix& cm);
double macro_f1_score(const ConfusionMatrix& cm);

// Fixed-width text in the standard report layout: one row per class, then
// accuracy / macro avg / weighted avg.
std::string report_text(const ClassificationReport& rep, const std::vector<std::string>& class_names);
nlohmann::ordered_json report_json(const ClassificationReport& rep,
                                   const std::vector<std::string>& class_names);

std::string confusion_csv(const ConfusionMatrix& cm, const std::vector<std::string>& class_names);

// Mean per-sample loss: 0/1 on label predictions, or weighted cross entropy
// on probability rows (unit weights by default).
double test_loss_labels(std::span<const int> y_true, std::span<const int> y_pred);
double test_loss_proba(std::span<const int> y_true, std::span<const double> proba,
                       std::size_t num_classes, const ClassWeights* weights = nullptr);

struct BenchmarkResult {
    std::size_t model_size_bytes = 0;
    double predictions_per_second = 0;
    double accuracy = 0;
    std::size_t batch_size = 0;
    std::size_t repetitions = 0;
};

// Median over `repetitions` timed passes of rows-predicted per wall second.
BenchmarkResult throughput_benchmark(const std::function<std::vector<int>()>& predict_batch,
                                     std::size_t batch_rows, std::size_t repetitions,
                                     std::size_t model_size_bytes, double accuracy);

}  // namespace trajml
