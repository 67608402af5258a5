#include <doctest.h>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "trajml/error.hpp"
#include "trajml/split.hpp"
#include "trajml/synth.hpp"
#include "trajml/trajectory.hpp"

using namespace trajml;
using testutil::TempFile;

TEST_SUITE("data") {

TEST_CASE("trajectory csv: minimal parse") {
    TempFile f("traj.csv", "frame,x,y,z\n0,0,0,0\n1,1,0,0\n2,2,0,0\n");
    auto rec = load_trajectory_csv(f.str());
    CHECK(rec.size() == 3);
    CHECK_FALSE(rec.has_labels());
    CHECK(rec.position[2][0] == 2.0);
}

TEST_CASE("trajectory csv: non-monotone frames rejected") {
    TempFile f("traj.csv", "frame,x,y,z\n0,0,0,0\n2,1,0,0\n1,2,0,0\n");
    CHECK_THROWS_WITH_AS(load_trajectory_csv(f.str()), doctest::Contains("E_ORDER"), Error);
}

TEST_CASE("trajectory csv: labels map to canonical vocabulary") {
    TempFile f("traj.csv", "frame,x,y,z,label\n0,0,0,0,Set needle\n1,1,0,0,Set needle\n");
    auto rec = load_trajectory_csv(f.str());
    REQUIRE(rec.has_labels());
    CHECK(rec.label_track[0] == action_label_id("Set needle"));
    CHECK(action_vocabulary()[static_cast<std::size_t>(rec.label_track[0])] == "Set needle");
}

TEST_CASE("trajectory csv: unknown label and malformed row") {
    TempFile bad_label("traj.csv", "frame,x,y,z,label\n0,0,0,0,Juggling\n");
    CHECK_THROWS_WITH_AS(load_trajectory_csv(bad_label.str()), doctest::Contains("E_VOCAB"), Error);
    TempFile bad_num("traj.csv", "frame,x,y,z\n0,0,zero,0\n");
    CHECK_THROWS_WITH_AS(load_trajectory_csv(bad_num.str()), doctest::Contains("line 2"), Error);
}

TEST_CASE("vocabulary: 11 classes, unknown name rejected") {
    CHECK(action_vocabulary().size() == 11);
    CHECK(action_label_id("Double throw") == 2);
    CHECK_THROWS_AS(action_label_id("nope"), Error);
}

TEST_CASE("characteristics: constant velocity line") {
    TrajectoryRecording rec;
    for (int i = 0; i < 10; ++i) {
        rec.frame_index.push_back(i);
        rec.position.push_back({static_cast<double>(i), 0, 0});
    }
    auto c = compute_characteristics(rec);
    CHECK(c.mean_speed == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.mean_acceleration == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(c.trajectory_length == 10);
}

TEST_CASE("characteristics: degenerate point cloud") {
    TrajectoryRecording rec;
    for (int i = 0; i < 5; ++i) {
        rec.frame_index.push_back(i);
        rec.position.push_back({1.0, 2.0, 3.0});
    }
    auto c = compute_characteristics(rec);
    CHECK(c.trajectory_range == 0.0);
    CHECK(c.trajectory_deviation == 0.0);
}

TEST_CASE("characteristics: 3-4-5 bounding box diagonal") {
    TrajectoryRecording rec;
    rec.frame_index = {0, 1, 2};
    rec.position = {{0, 0, 0}, {1.5, 2.0, 0}, {3, 4, 0}};
    auto c = compute_characteristics(rec);
    CHECK(c.trajectory_range == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("characteristics: translation invariance") {
    TrajectoryRecording rec, shifted;
    auto rng = make_rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int i = 0; i < 20; ++i) {
        rec.frame_index.push_back(i);
        shifted.frame_index.push_back(i);
        std::array<double, 3> p = {u(rng), u(rng), u(rng)};
        rec.position.push_back(p);
        shifted.position.push_back({p[0] + 100, p[1] - 40, p[2] + 7});
    }
    auto a = compute_characteristics(rec);
    auto b = compute_characteristics(shifted);
    CHECK(a.mean_speed == doctest::Approx(b.mean_speed).epsilon(1e-9));
    CHECK(a.mean_acceleration == doctest::Approx(b.mean_acceleration).epsilon(1e-9));
    CHECK(a.trajectory_range == doctest::Approx(b.trajectory_range).epsilon(1e-9));
    CHECK(a.trajectory_deviation == doctest::Approx(b.trajectory_deviation).epsilon(1e-9));
}

TEST_CASE("characteristics: too short") {
    TrajectoryRecording rec;
    rec.frame_index = {0, 1};
    rec.position = {{0, 0, 0}, {1, 0, 0}};
    CHECK_THROWS_AS(compute_characteristics(rec), Error);
}

TEST_CASE("windowing: row count formula") {
    TrajectoryRecording rec;
    for (int i = 0; i < 10; ++i) {
        rec.frame_index.push_back(i);
        rec.position.push_back({static_cast<double>(i), 0, 0});
    }
    WindowSpec spec;
    spec.window_len = 5;
    spec.stride = 5;
    auto ds = window_featurize(rec, spec);
    CHECK(ds.rows == 2);
    CHECK(ds.cols == 18);

    // property over many (len, window, stride) combos
    for (std::size_t len : {5, 9, 24, 60}) {
        TrajectoryRecording r;
        for (std::size_t i = 0; i < len; ++i) {
            r.frame_index.push_back(static_cast<std::int64_t>(i));
            r.position.push_back({static_cast<double>(i), 0, 0});
        }
        for (std::size_t w : {2, 3, 5}) {
            for (std::size_t s = 1; s <= w; ++s) {
                WindowSpec ws;
                ws.window_len = w;
                ws.stride = s;
                CHECK(window_featurize(r, ws).rows == (len - w) / s + 1);
            }
        }
    }
}

TEST_CASE("windowing: constant window has zero motion features") {
    TrajectoryRecording rec;
    for (int i = 0; i < 6; ++i) {
        rec.frame_index.push_back(i);
        rec.position.push_back({2, 2, 2});
    }
    WindowSpec spec;
    spec.window_len = 6;
    spec.stride = 1;
    auto ds = window_featurize(rec, spec);
    REQUIRE(ds.rows == 1);
    auto names = window_feature_names();
    for (const char* f : {"speed_mean", "speed_max", "acc_mean", "acc_max", "range", "deviation"}) {
        auto it = std::find(names.begin(), names.end(), f);
        REQUIRE(it != names.end());
        CHECK(ds.at(0, static_cast<std::size_t>(it - names.begin())) == 0.0);
    }
}

TEST_CASE("windowing: majority label rule") {
    TrajectoryRecording rec;
    const int a = action_label_id("Tension"), b = action_label_id("Set needle");
    std::vector<int> track = {a, a, b, a, a};
    for (int i = 0; i < 5; ++i) {
        rec.frame_index.push_back(i);
        rec.position.push_back({static_cast<double>(i), 0, 0});
        rec.label_track.push_back(track[static_cast<std::size_t>(i)]);
    }
    WindowSpec spec;
    spec.window_len = 5;
    spec.stride = 1;
    auto ds = window_featurize(rec, spec);
    CHECK(ds.labels[0] == a);
    spec.label_rule = WindowLabelRule::Center;
    CHECK(window_featurize(rec, spec).labels[0] == b);
}

TEST_CASE("windowing: recording shorter than window") {
    TrajectoryRecording rec;
    rec.frame_index = {0, 1};
    rec.position = {{0, 0, 0}, {1, 0, 0}};
    WindowSpec spec;
    CHECK_THROWS_AS(window_featurize(rec, spec), Error);
}

TEST_CASE("dataset csv round trip and schema checks") {
    auto ds = testutil::make_blobs({4, 3}, 3, 0.5, 42);
    TempFile f("ds.csv");
    save_dataset_csv(ds, f.str());
    auto back = load_dataset_csv(f.str());
    CHECK(back.rows == ds.rows);
    CHECK(back.cols == ds.cols);
    CHECK(back.labels == ds.labels);
    CHECK(back.class_names == ds.class_names);
    for (std::size_t i = 0; i < ds.features.size(); ++i)
        CHECK(back.features[i] == ds.features[i]);  // precision-17 exactness

    TempFile bad("bad.csv", "a,b,label\n1,2,x\n");
    CHECK_THROWS_WITH_AS(load_dataset_csv(bad.str()), doctest::Contains("E_SCHEMA"), Error);
}

TEST_CASE("class distribution counts") {
    LabeledDataset ds;
    ds.cols = 1;
    ds.class_names = {"a", "b"};
    ds.features = {0, 0, 0};
    ds.labels = {0, 0, 1};
    ds.rows = 3;
    auto dist = class_distribution(ds);
    CHECK(dist.counts == std::vector<std::size_t>{2, 1});
    CHECK(dist.total == 3);

    LabeledDataset empty;
    empty.class_names = {"a", "b"};
    auto d0 = class_distribution(empty);
    CHECK(d0.counts == std::vector<std::size_t>{0, 0});
    CHECK(d0.total == 0);
}

TEST_CASE("synth: balanced counts and class presence") {
    SynthSpec spec;
    spec.profile = SynthProfile::Balanced;
    spec.balanced_total = 110;
    auto r = synth_generate(spec, 3);
    auto dist = class_distribution(r.train);
    for (std::size_t c = 0; c < 11; ++c) CHECK(dist.counts[c] == 10);
    CHECK(r.train.cols == 18);
    CHECK(r.train.class_names == action_vocabulary());
}

TEST_CASE("synth: paper_like has 11 classes, majority is Double throw") {
    SynthSpec spec;
    auto r = synth_generate(spec, 9);
    auto dist = class_distribution(r.train);
    std::size_t max_c = 0;
    for (std::size_t c = 0; c < dist.counts.size(); ++c) {
        CHECK(dist.counts[c] > 0);
        if (dist.counts[c] > dist.counts[max_c]) max_c = c;
    }
    CHECK(r.train.class_names[max_c] == "Double throw");
    // imbalance mirrors the support ratios: majority/minority is large
    std::size_t min_count = dist.counts[0];
    for (auto c : dist.counts) min_count = std::min(min_count, c);
    CHECK(dist.counts[max_c] / std::max<std::size_t>(min_count, 1) >= 20);
}

TEST_CASE("synth: determinism and custom-count validation") {
    SynthSpec spec;
    auto a = synth_generate(spec, 5);
    auto b = synth_generate(spec, 5);
    CHECK(a.train.features == b.train.features);
    CHECK(a.test.features == b.test.features);
    CHECK(a.train.labels == b.train.labels);
    auto c = synth_generate(spec, 6);
    CHECK(a.train.features != c.train.features);

    SynthSpec zero;
    zero.profile = SynthProfile::Custom;
    zero.custom_counts = std::vector<std::size_t>(11, 5);
    zero.custom_counts[3] = 0;
    CHECK_THROWS_AS(synth_generate(zero, 1), Error);
}

TEST_CASE("kfold: per-class balance and partition") {
    auto ds = testutil::make_blobs({8, 2}, 2, 0.3, 7);
    auto folds = stratified_kfold(ds, 2, 123);
    REQUIRE(folds.size() == 2);
    std::set<std::size_t> seen;
    for (const auto& fold : folds) {
        std::size_t a = 0, b = 0;
        for (auto i : fold.valid) {
            (ds.labels[i] == 0 ? a : b)++;
            seen.insert(i);
        }
        CHECK(a == 4);
        CHECK(b == 1);
        CHECK(fold.train.size() + fold.valid.size() == ds.rows);
    }
    CHECK(seen.size() == ds.rows);
}

TEST_CASE("kfold: proportion property across seeds") {
    auto ds = testutil::make_blobs({13, 7, 25}, 2, 0.3, 99);
    for (std::uint64_t seed : {0ULL, 1ULL, 17ULL}) {
        for (std::size_t k : {2, 3, 5}) {
            auto folds = stratified_kfold(ds, k, seed);
            for (std::size_t c = 0; c < 3; ++c) {
                std::size_t lo = ds.rows, hi = 0;
                for (const auto& fold : folds) {
                    std::size_t n = 0;
                    for (auto i : fold.valid)
                        if (ds.labels[i] == static_cast<int>(c)) ++n;
                    lo = std::min(lo, n);
                    hi = std::max(hi, n);
                }
                CHECK(hi - lo <= 1);
            }
            // deterministic
            auto again = stratified_kfold(ds, k, seed);
            for (std::size_t f = 0; f < k; ++f) CHECK(folds[f].valid == again[f].valid);
        }
    }
}

TEST_CASE("kfold: class smaller than k names the class") {
    auto ds = testutil::make_blobs({4, 1}, 2, 0.3, 7);
    CHECK_THROWS_WITH_AS(stratified_kfold(ds, 2, 0), doctest::Contains("class1"), Error);
}

TEST_CASE("stratified holdout: disjoint, stratified, deterministic") {
    auto ds = testutil::make_blobs({40, 10}, 2, 0.4, 21);
    auto [fit_idx, hold_idx] = stratified_holdout(ds, 0.2, 77);
    CHECK(fit_idx.size() + hold_idx.size() == ds.rows);
    std::set<std::size_t> s(fit_idx.begin(), fit_idx.end());
    for (auto i : hold_idx) CHECK(s.count(i) == 0);
    std::size_t minority_held = 0;
    for (auto i : hold_idx)
        if (ds.labels[i] == 1) ++minority_held;
    CHECK(minority_held == 2);
    auto [f2, h2] = stratified_holdout(ds, 0.2, 77);
    CHECK(f2 == fit_idx);
    CHECK(h2 == hold_idx);
}

}  // TEST_SUITE
