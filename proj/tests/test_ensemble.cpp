#include <doctest.h>

#include "helpers.hpp"
#include "trajml/error.hpp"
#include "trajml/ensemble.hpp"
#include "trajml/learners.hpp"
#include "trajml/report.hpp"

using namespace trajml;

namespace {

Configuration balancing_only(AlgorithmId alg) {
    Configuration cfg;
    cfg.algorithm = alg;
    cfg.values["balancing"] = std::string("none");
    return cfg;
}

// candidate whose probability rows are fixed per true label
Candidate fixed_candidate(const std::vector<int>& y, double p_correct, std::size_t C) {
    Candidate c;
    c.model.class_count = C;
    c.model.algorithm = AlgorithmId::Knn;
    c.model.config = balancing_only(AlgorithmId::Knn);
    for (int label : y) {
        for (std::size_t k = 0; k < C; ++k) {
            double wrong = (1.0 - p_correct) / static_cast<double>(C - 1);
            c.holdout_proba.push_back(k == static_cast<std::size_t>(label) ? p_correct : wrong);
        }
    }
    c.cv_loss = 1.0 - p_correct;
    return c;
}

}  // namespace

TEST_SUITE("ensemble") {

TEST_CASE("greedy select: dominant candidate takes all the weight") {
    std::vector<int> y = {0, 1, 0, 1, 1, 0};
    std::vector<Candidate> candidates;
    candidates.push_back(fixed_candidate(y, 0.9, 2));   // always right
    candidates.push_back(fixed_candidate(y, 0.05, 2));  // always wrong
    auto ens = greedy_select(candidates, y, 2, 50, Metric::BalancedAccuracy);
    REQUIRE(ens.members.size() == 1);
    CHECK(ens.weights[0] == 1.0);
    CHECK(ens.validation_loss == doctest::Approx(0.0));
}

TEST_CASE("greedy select: single candidate gets weight one") {
    std::vector<int> y = {0, 1, 1};
    std::vector<Candidate> candidates = {fixed_candidate(y, 0.7, 2)};
    auto ens = greedy_select(candidates, y, 2, 10, Metric::BalancedAccuracy);
    REQUIRE(ens.members.size() == 1);
    CHECK(ens.weights[0] == 1.0);
    CHECK_THROWS_AS(greedy_select({}, y, 2, 10, Metric::BalancedAccuracy), Error);
}

TEST_CASE("greedy select: weights sum to one, never worse than best single") {
    auto rng = make_rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t C = 3, m = 30;
        std::vector<int> y;
        for (std::size_t i = 0; i < m; ++i)
            y.push_back(static_cast<int>(i % C));
        std::vector<Candidate> candidates;
        for (int k = 0; k < 6; ++k) {
            Candidate c;
            c.model.class_count = C;
            c.model.config = balancing_only(AlgorithmId::Knn);
            c.model.config.values["noise_id"] = std::int64_t{k};  // distinct configs
            for (std::size_t i = 0; i < m; ++i) {
                double a = u(rng), b = u(rng), cc = u(rng);
                double s = a + b + cc;
                c.holdout_proba.push_back(a / s);
                c.holdout_proba.push_back(b / s);
                c.holdout_proba.push_back(cc / s);
            }
            candidates.push_back(std::move(c));
        }
        auto ens = greedy_select(candidates, y, C, 25, Metric::MacroF1);
        double sum = 0;
        for (double w : ens.weights) {
            CHECK(w > 0.0);
            sum += w;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

        // best single candidate loss under the same metric
        double best_single = 1e300;
        for (const auto& cand : candidates) {
            auto pred = argmax_labels(cand.holdout_proba, m, C);
            auto cm = confusion(y, pred, C);
            best_single = std::min(best_single, 1.0 - macro_f1_score(cm));
        }
        CHECK(ens.validation_loss <= best_single + 1e-12);
    }
}

TEST_CASE("ensemble predictions: averaging and zero-weight invariance") {
    auto ds = testutil::make_blobs({20, 20}, 2, 0.5, 6);
    Configuration cfg = balancing_only(AlgorithmId::Knn);
    cfg.values["k"] = std::int64_t{1};
    cfg.values["weighting"] = std::string("uniform");
    cfg.values["metric"] = std::string("euclidean");
    auto m1 = fit_with_balancing(cfg, ds, 1);
    cfg.values["k"] = std::int64_t{5};
    auto m2 = fit_with_balancing(cfg, ds, 1);

    EnsembleModel single;
    single.members = {m1};
    single.weights = {1.0};
    auto p_single = ensemble_predict_proba(single, ds);
    CHECK(p_single == predict_proba(*m1.model, ds));

    EnsembleModel pair;
    pair.members = {m1, m2};
    pair.weights = {0.5, 0.5};
    auto p_pair = ensemble_predict_proba(pair, ds);
    auto pa = predict_proba(*m1.model, ds);
    auto pb = predict_proba(*m2.model, ds);
    for (std::size_t i = 0; i < p_pair.size(); ++i)
        CHECK(p_pair[i] == doctest::Approx(0.5 * pa[i] + 0.5 * pb[i]).epsilon(1e-12));

    // a zero-weight member never changes the output
    EnsembleModel with_zero;
    with_zero.members = {m1, m2};
    with_zero.weights = {1.0, 0.0};
    CHECK(ensemble_predict_proba(with_zero, ds) == p_single);

    // member permutation with matched weights leaves probabilities unchanged
    EnsembleModel swapped;
    swapped.members = {m2, m1};
    swapped.weights = {0.5, 0.5};
    auto p_swapped = ensemble_predict_proba(swapped, ds);
    for (std::size_t i = 0; i < p_pair.size(); ++i)
        CHECK(p_swapped[i] == doctest::Approx(p_pair[i]).epsilon(1e-12));

    CHECK(ensemble_size_bytes(pair) == m1.size_bytes + m2.size_bytes);
}

TEST_CASE("contribution table: shape, ordering, traceability") {
    std::vector<int> y = {0, 1, 0, 1, 0, 1, 0, 1};
    std::vector<Candidate> candidates;
    candidates.push_back(fixed_candidate(y, 0.9, 2));
    candidates.push_back(fixed_candidate(y, 0.8, 2));
    candidates[1].model.config.values["k"] = std::int64_t{3};  // make configs distinct
    // make the weaker candidate disagree on some rows so it can contribute
    for (std::size_t i = 0; i < 4; ++i) candidates[1].holdout_proba[i] = 0.5;

    auto ens = greedy_select(candidates, y, 2, 20, Metric::BalancedAccuracy);
    auto rows = contribution_table(ens, candidates, y, 2, Metric::BalancedAccuracy);
    REQUIRE(rows.size() == ens.members.size());
    double sum = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i)
        CHECK(rows[i].ensemble_weight >= rows[i + 1].ensemble_weight);
    for (const auto& r : rows) {
        sum += r.ensemble_weight;
        CHECK(r.validation_score >= 0.0);
        CHECK(r.validation_score <= 1.0);
        CHECK(r.balancing_strategy == "none");
        CHECK(r.classifier.find("knn") != std::string::npos);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

    auto csv = contribution_table_csv(rows);
    CHECK(csv.rfind("classifier,ensemble_weight,cost,balancing_strategy,validation_score\n", 0) ==
          0);
    auto text = contribution_table_text(rows);
    CHECK(text.find("Ensemble Weight") != std::string::npos);
    CHECK(text.find("Validation Score") != std::string::npos);
}

}  // TEST_SUITE
