#include "trajml/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "trajml/error.hpp"

namespace trajml {

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (std::size_t c : counts) t += c;
    return t;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred,
                          std::size_t num_classes) {
    if (y_true.size() != y_pred.size())
        throw contract_error("y_true and y_pred length mismatch");
    ConfusionMatrix cm;
    cm.num_classes = num_classes;
    cm.counts.assign(num_classes * num_classes, 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const auto t = static_cast<std::size_t>(y_true[i]);
        const auto p = static_cast<std::size_t>(y_pred[i]);
        if (t >= num_classes || p >= num_classes)
            throw contract_error("label out of range in confusion()");
        ++cm.counts[t * num_classes + p];
    }
    return cm;
}

ClassificationReport classification_report(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw data_error("empty confusion matrix");
    const std::size_t C = cm.num_classes;
    ClassificationReport rep;
    rep.per_class.resize(C);
    std::size_t diag = 0;

    for (std::size_t c = 0; c < C; ++c) {
        std::size_t tp = cm.at(c, c), fp = 0, fn = 0, support = 0;
        for (std::size_t o = 0; o < C; ++o) {
            if (o != c) {
                fp += cm.at(o, c);
                fn += cm.at(c, o);
            }
            support += cm.at(c, o);
        }
        diag += tp;
        auto& m = rep.per_class[c];
        m.support = support;
        if (tp + fp == 0) {
            m.precision = 0;
            m.zero_division = true;
        } else {
            m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
        }
        if (tp + fn == 0) {
            m.recall = 0;
            m.zero_division = true;
        } else {
            m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
        }
        m.f1 = m.precision + m.recall > 0 ? 2 * m.precision * m.recall / (m.precision + m.recall)
                                          : 0.0;
    }

    rep.total_support = cm.total();
    rep.accuracy = static_cast<double>(diag) / static_cast<double>(rep.total_support);
    for (const auto& m : rep.per_class) {
        rep.macro_precision += m.precision;
        rep.macro_recall += m.recall;
        rep.macro_f1 += m.f1;
        const double frac = static_cast<double>(m.support) / static_cast<double>(rep.total_support);
        rep.weighted_precision += frac * m.precision;
        rep.weighted_recall += frac * m.recall;
        rep.weighted_f1 += frac * m.f1;
    }
    rep.macro_precision /= static_cast<double>(C);
    rep.macro_recall /= static_cast<double>(C);
    rep.macro_f1 /= static_cast<double>(C);
    return rep;
}

double balanced_accuracy(const ConfusionMatrix& cm) {
    const std::size_t C = cm.num_classes;
    double sum = 0;
    std::size_t present = 0;
    for (std::size_t c = 0; c < C; ++c) {
        std::size_t support = 0;
        for (std::size_t o = 0; o < C; ++o) support += cm.at(c, o);
        if (support == 0) continue;  // absent classes do not count
        sum += static_cast<double>(cm.at(c, c)) / static_cast<double>(support);
        ++present;
    }
    return present == 0 ? 0.0 : sum / static_cast<double>(present);
}

double macro_f1_score(const ConfusionMatrix& cm) {
    auto rep = classification_report(cm);
    return rep.macro_f1;
}

std::string report_text(const ClassificationReport& rep,
                        const std::vector<std::string>& class_names) {
    std::size_t width = 12;
    for (const auto& n : class_names) width = std::max(width, n.size());
    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(width) + 2) << "Class" << std::right
        << std::setw(10) << "Precision" << std::setw(10) << "Recall" << std::setw(10)
        << "F1-score" << std::setw(10) << "Support" << '\n';
    out << std::fixed << std::setprecision(2);
    for (std::size_t c = 0; c < rep.per_class.size(); ++c) {
        const auto& m = rep.per_class[c];
        out << std::left << std::setw(static_cast<int>(width) + 2) << class_names[c]
            << std::right << std::setw(10) << m.precision << std::setw(10) << m.recall
            << std::setw(10) << m.f1 << std::setw(10) << m.support << '\n';
    }
    out << std::left << std::setw(static_cast<int>(width) + 2) << "Accuracy" << std::right
        << std::setw(10) << "" << std::setw(10) << "" << std::setw(10) << rep.accuracy
        << std::setw(10) << rep.total_support << '\n';
    out << std::left << std::setw(static_cast<int>(width) + 2) << "Macro avg" << std::right
        << std::setw(10) << rep.macro_precision << std::setw(10) << rep.macro_recall
        << std::setw(10) << rep.macro_f1 << std::setw(10) << rep.total_support << '\n';
    out << std::left << std::setw(static_cast<int>(width) + 2) << "Weighted avg" << std::right
        << std::setw(10) << rep.weighted_precision << std::setw(10) << rep.weighted_recall
        << std::setw(10) << rep.weighted_f1 << std::setw(10) << rep.total_support << '\n';
    return out.str();
}

nlohmann::ordered_json report_json(const ClassificationReport& rep,
                                   const std::vector<std::string>& class_names) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json classes;
    for (std::size_t c = 0; c < rep.per_class.size(); ++c) {
        const auto& m = rep.per_class[c];
        nlohmann::ordered_json jm;
        jm["precision"] = m.precision;
        jm["recall"] = m.recall;
        jm["f1"] = m.f1;
        jm["support"] = m.support;
        if (m.zero_division) jm["zero_division"] = true;
        classes[class_names[c]] = std::move(jm);
    }
    j["classes"] = std::move(classes);
    j["accuracy"] = rep.accuracy;
    j["macro_avg"] = {{"precision", rep.macro_precision},
                      {"recall", rep.macro_recall},
                      {"f1", rep.macro_f1}};
    j["weighted_avg"] = {{"precision", rep.weighted_precision},
                         {"recall", rep.weighted_recall},
                         {"f1", rep.weighted_f1}};
    j["total_support"] = rep.total_support;
    return j;
}

std::string confusion_csv(const ConfusionMatrix& cm, const std::vector<std::string>& class_names) {
    std::ostringstream out;
    out << "true\\pred";
    for (const auto& n : class_names) out << ',' << n;
    out << '\n';
    for (std::size_t t = 0; t < cm.num_classes; ++t) {
        out << class_names[t];
        for (std::size_t p = 0; p < cm.num_classes; ++p) out << ',' << cm.at(t, p);
        out << '\n';
    }
    return out.str();
}

double test_loss_labels(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.size() != y_pred.size()) throw contract_error("length mismatch");
    if (y_true.empty()) throw data_error("empty test set");
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) wrong += y_true[i] != y_pred[i] ? 1 : 0;
    return static_cast<double>(wrong) / static_cast<double>(y_true.size());
}

double test_loss_proba(std::span<const int> y_true, std::span<const double> proba,
                       std::size_t num_classes, const ClassWeights* weights) {
    if (y_true.size() * num_classes != proba.size())
        throw contract_error("probability matrix shape mismatch");
    if (y_true.empty()) throw data_error("empty test set");
    ClassWeights unit;
    if (!weights) {
        unit.w.assign(num_classes, 1.0);
        weights = &unit;
    }
    double sum = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i)
        sum += weighted_cross_entropy(*weights, y_true[i],
                                      {proba.data() + i * num_classes, num_classes});
    return sum / static_cast<double>(y_true.size());
}

BenchmarkResult throughput_benchmark(const std::function<std::vector<int>()>& predict_batch,
                                     std::size_t batch_rows, std::size_t repetitions,
                                     std::size_t model_size_bytes, double accuracy) {
    if (repetitions < 3) throw contract_error("repetitions must be >= 3");
    if (batch_rows == 0) throw data_error("empty benchmark input");
    std::vector<double> rates;
    rates.reserve(repetitions);
    for (std::size_t r = 0; r < repetitions; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        auto pred = predict_batch();
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        (void)pred;
        rates.push_back(static_cast<double>(batch_rows) / std::max(secs, 1e-9));
    }
    std::sort(rates.begin(), rates.end());
    const double median = repetitions % 2 == 1
                              ? rates[repetitions / 2]
                              : 0.5 * (rates[repetitions / 2 - 1] + rates[repetitions / 2]);
    BenchmarkResult res;
    res.model_size_bytes = model_size_bytes;
    res.predictions_per_second = median;
    res.accuracy = accuracy;
    res.batch_size = batch_rows;
    res.repetitions = repetitions;
    return res;
}

}  // namespace trajml
