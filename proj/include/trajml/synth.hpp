#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "trajml/dataset.hpp"

namespace trajml {

enum class SynthProfile { PaperLike, Balanced, Custom };

struct SynthSpec {
    SynthProfile profile = SynthProfile::PaperLike;
    // Balanced: total sample count split evenly across the 11 classes.
    std::size_t balanced_total = 1100;
    // Custom: per-class TEST-set counts (train gets 3x per the Exp/Nov split).
    std::vector<std::size_t> custom_counts;
};

struct SynthResult {
    LabeledDataset train;  // all Exp-styled windows plus half of the Nov ones
    LabeledDataset test;   // the remaining half of the Nov windows
};

// Synthesizes per-class motion windows and runs the standard featurizer on
// them, so train/test carry the same 18-feature schema as real trajectories.
// Class count ratios in the paper_like profile mirror the observed support
// ratios; novice-styled windows get faster, noisier motion than
// experienced-styled ones. Deterministic for a fixed (spec, seed).
SynthResult synth_generate(const SynthSpec& spec, std::uint64_t seed);

}  // namespace trajml
