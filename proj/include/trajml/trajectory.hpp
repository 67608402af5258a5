#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "trajml/dataset.hpp"

namespace trajml {

// The 11 suturing action classes, in canonical (report) order.
const std::vector<std::string>& action_vocabulary();
int action_label_id(const std::string& name);  // throws E_VOCAB on unknown name

enum class SkillLevel { Novice, Experienced };

struct TrajectoryRecording {
    std::vector<std::int64_t> frame_index;       // strictly increasing
    std::vector<std::array<double, 3>> position; // x, y, z per frame
    std::vector<int> label_track;                // per-frame class id; empty if unlabeled
    SkillLevel source_skill = SkillLevel::Novice;
    double frame_rate_hz = 25.0;

    std::size_t size() const { return position.size(); }
    bool has_labels() const { return !label_track.empty(); }
};

struct TrajectoryCharacteristics {
    std::size_t trajectory_length = 0;  // data point count
    double mean_speed = 0.0;            // units per frame
    double mean_acceleration = 0.0;     // units per frame^2
    double trajectory_range = 0.0;      // bounding-box diagonal
    double trajectory_deviation = 0.0;  // RMS distance from centroid
};

enum class WindowLabelRule { Majority, Center };

struct WindowSpec {
    std::size_t window_len = 25;  // 1 s at 25 fps
    std::size_t stride = 5;
    WindowLabelRule label_rule = WindowLabelRule::Majority;

    void validate() const;  // window_len >= 2, 1 <= stride <= window_len
};

// CSV schema: header "frame,x,y,z" or "frame,x,y,z,label".
TrajectoryRecording load_trajectory_csv(const std::string& path);

TrajectoryCharacteristics compute_characteristics(const TrajectoryRecording& rec);

// One row per window position; 18 kinematic summary features per window:
// per-axis mean/std/min/max, mean/max speed, mean/max acceleration,
// window range, window deviation.
LabeledDataset window_featurize(const TrajectoryRecording& rec, const WindowSpec& spec);

std::vector<std::string> window_feature_names();

}  // namespace trajml
