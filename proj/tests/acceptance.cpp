// Acceptance gate: one self-contained check per release criterion, each
// printing a single PASS/FAIL line. Run all checks or a single one with
// `acceptance --only N`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "trajml/error.hpp"
#include "trajml/pipeline.hpp"

using namespace trajml;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// distance from point p to the segment [a, b]
double segment_distance(std::span<const double> p, std::span<const double> a,
                        std::span<const double> b) {
    double ab2 = 0, ap_ab = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        ab2 += (b[j] - a[j]) * (b[j] - a[j]);
        ap_ab += (p[j] - a[j]) * (b[j] - a[j]);
    }
    const double t = ab2 > 0 ? std::clamp(ap_ab / ab2, 0.0, 1.0) : 0.0;
    double d2 = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const double q = a[j] + t * (b[j] - a[j]);
        d2 += (p[j] - q) * (p[j] - q);
    }
    return std::sqrt(d2);
}

// ---------------------------------------------------------------------------
// 1. Class-weight and weighted cross-entropy exactness.

Outcome criterion_1() {
    ClassDistribution dist;
    dist.counts = {1005, 1861, 9604, 251, 1076, 1754, 684, 630, 1876, 3259, 1432};
    for (std::size_t c : dist.counts) dist.total += c;
    auto w = class_weights(dist);
    const double w_majority = w.w[2];  // Double throw
    const double w_minority = w.w[3];  // Grasp needle
    bool ok = std::abs(w_majority - 0.2218) < 1e-3 && std::abs(w_minority - 8.487) < 1e-3;

    ClassWeights unit{{1.0, 1.0}};
    ok = ok && std::abs(weighted_cross_entropy(unit, 0, std::vector<double>{1.0, 0.0})) <= 1e-12;
    const double e1 = std::exp(-1.0);
    ok = ok &&
         std::abs(weighted_cross_entropy(unit, 0, std::vector<double>{e1, 1.0 - e1}) - 1.0) <=
             1e-12;
    ClassWeights two{{2.0, 2.0}};
    ok = ok && std::abs(weighted_cross_entropy(two, 0, std::vector<double>{0.5, 0.5}) -
                        2.0 * std::log(2.0)) <= 1e-12;

    std::ostringstream d;
    d << "w_majority=" << w_majority << " w_minority=" << w_minority;
    return {ok, d.str()};
}

// ---------------------------------------------------------------------------
// 2. SMOTE geometry: synthetic points lie on same-class segments.

Outcome criterion_2() {
    auto ds = testutil::make_blobs({100, 10}, 4, 0.8, 5);
    std::vector<std::size_t> minority_rows;
    for (std::size_t i = 0; i < ds.rows; ++i)
        if (ds.labels[i] == 1) minority_rows.push_back(i);

    std::size_t checked = 0;
    double worst = 0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        auto up = smote_oversample(ds, 5, seed);
        auto dist = class_distribution(up);
        if (dist.counts[0] != dist.counts[1]) return {false, "post-resample counts differ"};
        // originals come first; everything after is synthetic
        for (std::size_t i = ds.rows; i < up.rows; ++i) {
            const int label = up.labels[i];
            double best = 1e300;
            for (std::size_t a = 0; a < minority_rows.size(); ++a) {
                if (ds.labels[minority_rows[a]] != label) return {false, "synthetic label"};
                for (std::size_t b = a + 1; b < minority_rows.size(); ++b)
                    best = std::min(best, segment_distance(up.row(i), ds.row(minority_rows[a]),
                                                           ds.row(minority_rows[b])));
            }
            worst = std::max(worst, best);
            ++checked;
        }
    }
    std::ostringstream d;
    d << checked << " synthetic points, max segment distance " << worst;
    return {worst <= 1e-9, d.str()};
}

// ---------------------------------------------------------------------------
// 3. CASH reaches the known optimum on a separable dataset.

Outcome criterion_3() {
    auto ds = testutil::make_separable(20, 3, 4);
    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        BudgetSpec budget;
        budget.max_evaluations = 30;
        budget.k_folds = 4;
        budget.seed = seed;
        auto result = run_cash(ds, default_config_space(), budget, {},
                               Metric::BalancedAccuracy, /*top_m=*/1);
        if (result.incumbent_loss <= 0.05) ++hits;
    }
    std::ostringstream d;
    d << hits << "/20 seeds reached incumbent loss <= 0.05";
    return {hits >= 18, d.str()};
}

// ---------------------------------------------------------------------------
// 4. Model-based search beats random search on a response surface.

Outcome criterion_4() {
    auto space = default_config_space();
    const std::size_t dim = space.encoded_dim();
    // fixed pseudo-random targets inside the encoded unit cube
    std::vector<double> target(dim);
    {
        auto rng = make_rng(99);
        std::uniform_real_distribution<double> u(0.2, 0.8);
        for (auto& t : target) t = u(rng);
    }
    auto surface = [&](const Configuration& cfg) {
        static const double penalty[] = {0.00, 0.15, 0.30, 0.45};
        auto e = space.encode(cfg);
        double sum = 0;
        std::size_t active = 0;
        for (std::size_t i = 0; i < dim; ++i) {
            if (e[i] < 0) continue;
            sum += (e[i] - target[i]) * (e[i] - target[i]);
            ++active;
        }
        return 0.5 * penalty[static_cast<int>(cfg.algorithm)] +
               0.5 * (active ? sum / static_cast<double>(active) : 1.0);
    };

    std::vector<double> bo_best, random_best;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        ObjectiveFn objective = [&](const Configuration& cfg, std::uint64_t,
                                    std::optional<double>) {
            EvaluationRecord rec;
            rec.config = cfg;
            rec.fold_losses = {surface(cfg)};
            rec.mean_loss = rec.fold_losses[0];
            return rec;
        };
        BudgetSpec budget;
        budget.max_evaluations = 40;
        budget.seed = seed;
        bo_best.push_back(run_cash_with_objective(space, objective, budget).incumbent_loss);

        double best = 1e300;
        for (std::size_t i = 0; i < 40; ++i)
            best = std::min(best, surface(space.sample(mix_seed(seed * 7919 + 17, i))));
        random_best.push_back(best);
    }
    const double bo_med = median(bo_best), rnd_med = median(random_best);
    std::ostringstream d;
    d << "median incumbent: model-based " << bo_med << " vs random " << rnd_med;
    return {bo_med <= rnd_med, d.str()};
}

// ---------------------------------------------------------------------------
// 5. Greedy ensemble never loses to its best single candidate.

Outcome criterion_5() {
    const std::size_t C = 3, m = 40;
    double worst_gap = -1e300;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto rng = make_rng(seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<int> y;
        for (std::size_t i = 0; i < m; ++i) y.push_back(static_cast<int>(i % C));
        std::vector<Candidate> candidates;
        for (int k = 0; k < 6; ++k) {
            Candidate c;
            c.model.class_count = C;
            c.model.config.algorithm = AlgorithmId::Knn;
            c.model.config.values["balancing"] = std::string("none");
            c.model.config.values["k"] = std::int64_t{k + 1};
            for (std::size_t i = 0; i < m * C; ++i) c.holdout_proba.push_back(u(rng));
            candidates.push_back(std::move(c));
        }
        auto ens = greedy_select(candidates, y, C, 50, Metric::BalancedAccuracy);

        double weight_sum = 0;
        for (double w : ens.weights) weight_sum += w;
        if (std::abs(weight_sum - 1.0) > 1e-9) return {false, "weights do not sum to 1"};

        double best_single = 1e300;
        for (const auto& cand : candidates) {
            auto pred = argmax_labels(cand.holdout_proba, m, C);
            best_single =
                std::min(best_single, 1.0 - balanced_accuracy(confusion(y, pred, C)));
        }
        worst_gap = std::max(worst_gap, ens.validation_loss - best_single);
        if (ens.validation_loss > best_single + 1e-12)
            return {false, "ensemble lost to a single candidate"};
    }
    std::ostringstream d;
    d << "50 seeds, worst (ensemble - best single) gap " << worst_gap;
    return {true, d.str()};
}

// ---------------------------------------------------------------------------
// 6. Leakage guard: label-derived validation-only feature buys nothing.

Outcome criterion_6() {
    Configuration cfg;
    cfg.algorithm = AlgorithmId::DecisionTree;
    cfg.values["max_depth"] = std::int64_t{6};
    cfg.values["min_samples_leaf"] = std::int64_t{2};
    cfg.values["criterion"] = std::string("gini");
    cfg.values["balancing"] = std::string("none");

    auto with_column = [](const LabeledDataset& ds, const std::vector<double>& col) {
        LabeledDataset out = ds;
        out.cols = ds.cols + 1;
        out.features.clear();
        for (std::size_t i = 0; i < ds.rows; ++i) {
            for (std::size_t j = 0; j < ds.cols; ++j) out.features.push_back(ds.at(i, j));
            out.features.push_back(col[i]);
        }
        return out;
    };

    std::vector<double> deltas;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto base = testutil::make_blobs({40, 40}, 3, 2.0, seed + 100);
        auto rng = make_rng(seed + 500);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> noise_col(base.rows), leak_col(base.rows);
        for (std::size_t i = 0; i < base.rows; ++i) {
            noise_col[i] = u(rng);
            leak_col[i] = static_cast<double>(base.labels[i]);
        }
        auto clean = with_column(base, noise_col);
        auto leak = with_column(base, leak_col);

        auto folds = stratified_kfold(base, 5, seed);
        double loss_clean = 0, loss_leak = 0;
        for (const auto& fold : folds) {
            auto train = clean.select_rows(fold.train);
            auto model = fit_with_balancing(cfg, train, seed);
            loss_clean += validation_loss(*model.model, clean.select_rows(fold.valid),
                                          Metric::BalancedAccuracy);
            loss_leak += validation_loss(*model.model, leak.select_rows(fold.valid),
                                         Metric::BalancedAccuracy);
        }
        deltas.push_back((loss_clean - loss_leak) / static_cast<double>(folds.size()));
    }
    double mean = 0;
    for (double d : deltas) mean += d;
    mean /= static_cast<double>(deltas.size());
    double var = 0;
    for (double d : deltas) var += (d - mean) * (d - mean);
    const double sd = std::sqrt(var / static_cast<double>(deltas.size() - 1));
    const double threshold =
        std::max(0.02, 2.0 * sd / std::sqrt(static_cast<double>(deltas.size())));
    std::ostringstream d;
    d << "mean paired improvement " << mean << " vs noise threshold " << threshold;
    return {mean <= threshold, d.str()};
}

// ---------------------------------------------------------------------------
// 7. Classification report equals a brute-force counting oracle.

Outcome criterion_7() {
    auto rng = make_rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t C = 2 + static_cast<std::size_t>(trial % 4);
        std::uniform_int_distribution<std::size_t> nd(1, 100);
        std::uniform_int_distribution<int> cd(0, static_cast<int>(C) - 1);
        const std::size_t n = nd(rng);
        std::vector<int> y_true, y_pred;
        for (std::size_t i = 0; i < n; ++i) {
            y_true.push_back(cd(rng));
            y_pred.push_back(cd(rng));
        }
        auto rep = classification_report(confusion(y_true, y_pred, C));

        std::size_t correct = 0;
        for (std::size_t i = 0; i < n; ++i) correct += y_true[i] == y_pred[i];
        if (std::abs(rep.accuracy - static_cast<double>(correct) / static_cast<double>(n)) >
            1e-12)
            return {false, "accuracy mismatch"};
        for (std::size_t c = 0; c < C; ++c) {
            std::size_t tp = 0, fp = 0, fn = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const bool t = y_true[i] == static_cast<int>(c);
                const bool p = y_pred[i] == static_cast<int>(c);
                tp += t && p;
                fp += !t && p;
                fn += t && !p;
            }
            const double prec = tp + fp ? double(tp) / double(tp + fp) : 0.0;
            const double rec = tp + fn ? double(tp) / double(tp + fn) : 0.0;
            const double f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
            if (rep.per_class[c].support != tp + fn) return {false, "support mismatch"};
            if (std::abs(rep.per_class[c].precision - prec) > 1e-12 ||
                std::abs(rep.per_class[c].recall - rec) > 1e-12 ||
                std::abs(rep.per_class[c].f1 - f1) > 1e-12)
                return {false, "per-class metric mismatch"};
        }
    }

    // hand-computed two-class fixture: confusion [[2,1],[1,2]]
    auto rep = classification_report(
        confusion(std::vector<int>{0, 0, 0, 1, 1, 1}, std::vector<int>{0, 0, 1, 0, 1, 1}, 2));
    for (std::size_t c = 0; c < 2; ++c)
        if (std::abs(rep.per_class[c].precision - 2.0 / 3.0) > 1e-12 ||
            std::abs(rep.per_class[c].recall - 2.0 / 3.0) > 1e-12 ||
            std::abs(rep.per_class[c].f1 - 2.0 / 3.0) > 1e-12)
            return {false, "two-class fixture mismatch"};
    return {true, "200 random cases + fixture match within 1e-12"};
}

// ---------------------------------------------------------------------------
// 8. End-to-end fit on the imbalanced synthetic profile.

Outcome criterion_8() {
    std::size_t hits = 0;
    double min_ba = 1.0, min_recall = 1.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        SynthSpec spec;  // imbalanced 11-class profile
        RunConfig rc;
        rc.synth = spec;
        rc.budget.max_evaluations = 50;
        rc.budget.k_folds = 3;
        rc.budget.per_eval_time_limit_s = 2.0;
        rc.top_m = 15;
        rc.seed = seed;
        auto art = run_fit(rc);

        auto test = synth_generate(spec, seed).test;
        auto pred = ensemble_predict_label(art.bundle.ensemble, test);
        auto cm = confusion(test.labels, pred, test.num_classes());
        const double ba = balanced_accuracy(cm);

        // class 3 is the minority (Grasp needle analog)
        std::size_t support = 0;
        for (std::size_t p = 0; p < cm.num_classes; ++p) support += cm.at(3, p);
        const double recall = support ? static_cast<double>(cm.at(3, 3)) / support : 0.0;

        min_ba = std::min(min_ba, ba);
        min_recall = std::min(min_recall, recall);
        if (ba >= 0.85 && recall >= 0.70) ++hits;
    }
    std::ostringstream d;
    d << hits << "/10 seeds (worst balanced accuracy " << min_ba << ", worst minority recall "
      << min_recall << ")";
    return {hits >= 8, d.str()};
}

// ---------------------------------------------------------------------------
// 9. Warmstart from the knowledge base never trails cold start.

Outcome criterion_9() {
    auto space = default_config_space();
    auto x = testutil::make_separable(30, 3, 21);
    std::vector<std::pair<std::string, LabeledDataset>> donors = {
        {"member", x},
        {"blobs_a", testutil::make_blobs({30, 30}, 4, 0.7, 6)},
        {"blobs_b", testutil::make_blobs({60, 20}, 5, 0.7, 7)},
    };
    BudgetSpec kb_budget;
    kb_budget.max_evaluations = 8;
    kb_budget.k_folds = 3;
    kb_budget.seed = 7;
    auto kb = build_knowledge_base(donors, space, kb_budget);
    auto warm_cfgs = warmstart_select(kb, compute_meta_features(x), 2);

    std::size_t hits = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        BudgetSpec budget;
        budget.max_evaluations = 10;
        budget.k_folds = 3;
        budget.seed = seed;
        auto cold = run_cash(x, space, budget, {}, Metric::BalancedAccuracy, 1);
        auto warm = run_cash(x, space, budget, warm_cfgs, Metric::BalancedAccuracy, 1);
        if (warm.incumbent_loss <= cold.incumbent_loss + 1e-12) ++hits;
    }
    std::ostringstream d;
    d << hits << "/10 seeds with warmstarted incumbent <= cold incumbent";
    return {hits == 10, d.str()};
}

// ---------------------------------------------------------------------------
// 10. Determinism and bundle round trip.

Outcome criterion_10() {
    auto make_rc = [] {
        SynthSpec spec;
        spec.profile = SynthProfile::Balanced;
        spec.balanced_total = 132;
        RunConfig rc;
        rc.synth = spec;
        rc.budget.max_evaluations = 6;
        rc.budget.k_folds = 3;
        rc.top_m = 5;
        rc.ensemble_rounds = 10;
        rc.seed = 42;
        return rc;
    };
    auto a = run_fit(make_rc());
    auto b = run_fit(make_rc());
    if (a.bundle.serialize() != b.bundle.serialize())
        return {false, "bundles differ for identical run configs"};

    testutil::TempFile f("acceptance_bundle.json");
    a.bundle.save(f.str());
    auto back = ModelBundle::load(f.str(), default_config_space());  // self-verifies probe
    if (back.probe_predictions != a.bundle.probe_predictions)
        return {false, "probe predictions changed across the round trip"};
    auto proba = ensemble_predict_proba(back.ensemble, back.probe_features.data(),
                                        back.probe_rows, back.feature_names.size());
    if (argmax_labels(proba, back.probe_rows, back.class_names.size()) !=
        back.probe_predictions)
        return {false, "reloaded ensemble does not reproduce probe predictions"};
    std::ostringstream d;
    d << "byte-identical bundles (" << a.bundle.serialize().size() << " bytes), probe verified";
    return {true, d.str()};
}

// ---------------------------------------------------------------------------
// 11. Truncation sweep: sizes grow, throughput does not.

Outcome criterion_11() {
    auto ds = testutil::make_blobs({1500, 1500}, 4, 0.6, 8);
    EnsembleModel full;
    for (std::int64_t k : {1, 3, 5, 7}) {
        Configuration cfg;
        cfg.algorithm = AlgorithmId::Knn;
        cfg.values["k"] = k;
        cfg.values["weighting"] = std::string("uniform");
        cfg.values["metric"] = std::string("euclidean");
        cfg.values["balancing"] = std::string("none");
        full.members.push_back(fit_with_balancing(cfg, ds, 1));
    }
    full.weights = {0.4, 0.3, 0.2, 0.1};

    auto probe = testutil::make_blobs({150, 150}, 4, 0.6, 9);
    std::vector<std::size_t> sizes;
    std::vector<double> speeds;
    for (std::size_t members = 1; members <= full.members.size(); ++members) {
        EnsembleModel part;
        double wsum = 0;
        for (std::size_t i = 0; i < members; ++i) wsum += full.weights[i];
        for (std::size_t i = 0; i < members; ++i) {
            part.members.push_back(full.members[i]);
            part.weights.push_back(full.weights[i] / wsum);
        }
        auto result = throughput_benchmark(
            [&] { return ensemble_predict_label(part, probe); }, probe.rows,
            /*repetitions=*/5, ensemble_size_bytes(part),
            1.0 - test_loss_labels(probe.labels, ensemble_predict_label(part, probe)));
        sizes.push_back(result.model_size_bytes);
        speeds.push_back(result.predictions_per_second);
    }
    bool ok = true;
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        ok = ok && sizes[i] > sizes[i - 1];
        ok = ok && speeds[i] <= speeds[i - 1];
    }
    std::ostringstream d;
    d << "sizes";
    for (auto s : sizes) d << " " << s;
    d << "; preds/sec";
    for (auto s : speeds) d << " " << static_cast<long long>(s);
    return {ok, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i + 1 < argc; ++i)
        if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);

    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"class weights and weighted cross entropy", criterion_1},
        {"SMOTE segment geometry", criterion_2},
        {"CASH finds the separable optimum", criterion_3},
        {"model-based search beats random search", criterion_4},
        {"greedy ensemble never trails its best member", criterion_5},
        {"validation-only label leak buys nothing", criterion_6},
        {"classification report matches counting oracle", criterion_7},
        {"end-to-end fit on the imbalanced profile", criterion_8},
        {"warmstart never trails cold start", criterion_9},
        {"deterministic byte-identical bundles", criterion_10},
        {"truncation sweep size/throughput monotonicity", criterion_11},
    };

    bool all_pass = true;
    for (int i = 0; i < 11; ++i) {
        if (only && only != i + 1) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line << (outcome.pass ? "PASS" : "FAIL") << " criterion " << (i + 1) << ": "
             << criteria[i].first << " [" << outcome.detail << "] (" << secs << " s)";
        std::cout << line.str() << std::endl;
        all_pass = all_pass && outcome.pass;
    }
    return all_pass ? 0 : 1;
}
