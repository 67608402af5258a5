#include "trajml/synth.hpp"

#include <cmath>
#include <numbers>

#include "trajml/error.hpp"
#include "trajml/random.hpp"
#include "trajml/trajectory.hpp"

namespace trajml {

namespace {

// Per-class test-set supports of the paper_like profile, scaled from the
// observed class distribution (canonical vocabulary order).
const std::size_t kPaperSupports[11] = {1005, 1861, 9604, 251,  1076, 1754,
                                        684,  630,  1876, 3259, 1432};

std::size_t paper_test_count(std::size_t c) {
    auto scaled = static_cast<std::size_t>(std::llround(kPaperSupports[c] / 40.0));
    return std::max<std::size_t>(scaled, 5);
}

// One synthetic 25-frame motion window. Classes differ by anchor position,
// drift speed and oscillation; novice-styled windows move faster with much
// noisier positions (and therefore accelerations), mirroring the observed
// skill contrast.
TrajectoryRecording synth_window(std::size_t cls, SkillLevel skill, Rng& rng) {
    constexpr std::size_t frames = 25;
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(cls) / 11.0;
    const std::array<double, 3> anchor = {2.0 * std::cos(theta), 2.0 * std::sin(theta),
                                          0.3 * static_cast<double>(cls)};
    const std::array<double, 3> dir = {std::cos(theta + 0.7), std::sin(theta + 0.7), 0.1};
    const double base_speed = 0.30 + 0.12 * static_cast<double>(cls);
    const double amp = 0.20 + 0.05 * static_cast<double>((cls * 3) % 11);
    const double freq = (1.0 + static_cast<double>(cls % 4)) * 2.0 * std::numbers::pi /
                        static_cast<double>(frames);

    const bool novice = skill == SkillLevel::Novice;
    const double speed = base_speed * (novice ? 14.59 / 9.90 : 1.0);
    const double noise_sigma = novice ? 0.45 : 0.15;

    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * std::numbers::pi);
    const double phase = uni(rng);

    TrajectoryRecording rec;
    rec.source_skill = skill;
    rec.label_track.assign(frames, static_cast<int>(cls));
    for (std::size_t t = 0; t < frames; ++t) {
        const double ft = static_cast<double>(t);
        const double osc = amp * std::sin(freq * ft + phase);
        rec.frame_index.push_back(static_cast<std::int64_t>(t));
        rec.position.push_back({anchor[0] + speed * ft * dir[0] * 0.04 - osc * dir[1] +
                                    noise_sigma * gauss(rng),
                                anchor[1] + speed * ft * dir[1] * 0.04 + osc * dir[0] +
                                    noise_sigma * gauss(rng),
                                anchor[2] + speed * ft * dir[2] * 0.04 +
                                    noise_sigma * gauss(rng)});
    }
    return rec;
}

void append_window_rows(LabeledDataset& out, std::size_t cls, SkillLevel skill, std::size_t count,
                        Rng& rng) {
    WindowSpec spec;
    spec.window_len = 25;
    spec.stride = 25;
    for (std::size_t i = 0; i < count; ++i) {
        TrajectoryRecording rec = synth_window(cls, skill, rng);
        LabeledDataset one = window_featurize(rec, spec);
        out.features.insert(out.features.end(), one.features.begin(), one.features.end());
        out.labels.push_back(static_cast<int>(cls));
        ++out.rows;
    }
}

LabeledDataset empty_feature_set() {
    LabeledDataset ds;
    ds.cols = 18;
    ds.feature_names = window_feature_names();
    ds.class_names = action_vocabulary();
    return ds;
}

}  // namespace

SynthResult synth_generate(const SynthSpec& spec, std::uint64_t seed) {
    // Per-class test counts; train gets 3x (all Exp-styled windows plus the
    // Nov half that is not held out as test).
    std::vector<std::size_t> test_counts(11, 0);
    switch (spec.profile) {
        case SynthProfile::PaperLike:
            for (std::size_t c = 0; c < 11; ++c) test_counts[c] = paper_test_count(c);
            break;
        case SynthProfile::Balanced: {
            std::size_t per_class_train = spec.balanced_total / 11;
            if (per_class_train < 3) throw data_error("balanced_total too small");
            for (std::size_t c = 0; c < 11; ++c)
                test_counts[c] = std::max<std::size_t>(per_class_train / 3, 1);
            break;
        }
        case SynthProfile::Custom: {
            if (spec.custom_counts.size() != 11)
                throw data_error("custom counts must list all 11 classes");
            for (std::size_t c = 0; c < 11; ++c) {
                if (spec.custom_counts[c] == 0)
                    throw data_error("custom count for class '" + action_vocabulary()[c] +
                                     "' is zero");
                test_counts[c] = spec.custom_counts[c];
            }
            break;
        }
    }

    SynthResult result;
    result.train = empty_feature_set();
    result.test = empty_feature_set();

    for (std::size_t c = 0; c < 11; ++c) {
        auto rng = make_rng(seed, c);
        std::size_t train_per_class = spec.profile == SynthProfile::Balanced
                                          ? spec.balanced_total / 11
                                          : 3 * test_counts[c];
        // Exp-styled windows go to train; Nov windows split half train, half test.
        std::size_t nov_train = test_counts[c];
        std::size_t exp_train = train_per_class - nov_train;
        append_window_rows(result.train, c, SkillLevel::Experienced, exp_train, rng);
        append_window_rows(result.train, c, SkillLevel::Novice, nov_train, rng);
        append_window_rows(result.test, c, SkillLevel::Novice, test_counts[c], rng);
    }
    return result;
}

}  // namespace trajml
