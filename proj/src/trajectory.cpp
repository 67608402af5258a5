#include "trajml/trajectory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "trajml/error.hpp"

namespace trajml {

const std::vector<std::string>& action_vocabulary() {
    static const std::vector<std::string> names = {
        "Create bight",  "Distal bite",   "Double throw",
        "Grasp needle",  "Needle exits",  "Proximal bite",
        "Seek needle",   "Seek proximal insertion",
        "Set needle",    "Single throw",  "Tension",
    };
    return names;
}

int action_label_id(const std::string& name) {
    const auto& vocab = action_vocabulary();
    for (std::size_t i = 0; i < vocab.size(); ++i)
        if (vocab[i] == name) return static_cast<int>(i);
    throw vocab_error("unknown action label '" + name + "'");
}

void WindowSpec::validate() const {
    if (window_len < 2) throw data_error("window_len must be >= 2");
    if (stride == 0 || stride > window_len)
        throw data_error("stride must be in [1, window_len]");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double field_double(const std::string& s, std::size_t line_no) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw parse_error("line " + std::to_string(line_no) + ": bad numeric field '" + s + "'");
    return v;
}

std::int64_t field_int(const std::string& s, std::size_t line_no) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw parse_error("line " + std::to_string(line_no) + ": bad frame index '" + s + "'");
    return v;
}

}  // namespace

TrajectoryRecording load_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open trajectory file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw parse_error("empty trajectory file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_line(line);
    bool labeled = false;
    if (header.size() == 5 && header[4] == "label")
        labeled = true;
    else if (header.size() != 4)
        throw schema_error("expected header frame,x,y,z[,label] in " + path);
    if (header[0] != "frame" || header[1] != "x" || header[2] != "y" || header[3] != "z")
        throw schema_error("expected header frame,x,y,z[,label] in " + path);

    TrajectoryRecording rec;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_line(line);
        if (fields.size() != header.size())
            throw parse_error("line " + std::to_string(line_no) + ": expected " +
                              std::to_string(header.size()) + " fields");
        std::int64_t frame = field_int(fields[0], line_no);
        if (!rec.frame_index.empty() && frame <= rec.frame_index.back())
            throw order_error("line " + std::to_string(line_no) +
                              ": frame index not strictly increasing");
        rec.frame_index.push_back(frame);
        rec.position.push_back({field_double(fields[1], line_no), field_double(fields[2], line_no),
                                field_double(fields[3], line_no)});
        if (labeled) rec.label_track.push_back(action_label_id(fields[4]));
    }
    return rec;
}

namespace {

double dist3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace

TrajectoryCharacteristics compute_characteristics(const TrajectoryRecording& rec) {
    const std::size_t n = rec.size();
    if (n < 3) throw data_error("need at least 3 frames to compute characteristics");

    TrajectoryCharacteristics c;
    c.trajectory_length = n;

    double speed_sum = 0;
    for (std::size_t i = 1; i < n; ++i) speed_sum += dist3(rec.position[i], rec.position[i - 1]);
    c.mean_speed = speed_sum / static_cast<double>(n - 1);

    double acc_sum = 0;
    for (std::size_t i = 2; i < n; ++i) {
        std::array<double, 3> d2;
        for (int a = 0; a < 3; ++a)
            d2[static_cast<std::size_t>(a)] = rec.position[i][static_cast<std::size_t>(a)] -
                                              2 * rec.position[i - 1][static_cast<std::size_t>(a)] +
                                              rec.position[i - 2][static_cast<std::size_t>(a)];
        acc_sum += std::sqrt(d2[0] * d2[0] + d2[1] * d2[1] + d2[2] * d2[2]);
    }
    c.mean_acceleration = acc_sum / static_cast<double>(n - 2);

    std::array<double, 3> lo = rec.position[0], hi = rec.position[0], centroid = {0, 0, 0};
    for (const auto& p : rec.position) {
        for (std::size_t a = 0; a < 3; ++a) {
            lo[a] = std::min(lo[a], p[a]);
            hi[a] = std::max(hi[a], p[a]);
            centroid[a] += p[a];
        }
    }
    for (std::size_t a = 0; a < 3; ++a) centroid[a] /= static_cast<double>(n);
    c.trajectory_range = std::sqrt((hi[0] - lo[0]) * (hi[0] - lo[0]) +
                                   (hi[1] - lo[1]) * (hi[1] - lo[1]) +
                                   (hi[2] - lo[2]) * (hi[2] - lo[2]));

    double sq_sum = 0;
    for (const auto& p : rec.position) {
        double d = dist3(p, centroid);
        sq_sum += d * d;
    }
    c.trajectory_deviation = std::sqrt(sq_sum / static_cast<double>(n));
    return c;
}

std::vector<std::string> window_feature_names() {
    std::vector<std::string> names;
    const char* axes[3] = {"x", "y", "z"};
    for (const char* a : axes)
        for (const char* stat : {"mean", "std", "min", "max"})
            names.push_back(std::string(a) + "_" + stat);
    for (const char* k : {"speed_mean", "speed_max", "acc_mean", "acc_max", "range", "deviation"})
        names.emplace_back(k);
    return names;
}

LabeledDataset window_featurize(const TrajectoryRecording& rec, const WindowSpec& spec) {
    spec.validate();
    const std::size_t n = rec.size();
    if (n < spec.window_len)
        throw data_error("recording shorter than window_len: no windows would be produced");

    LabeledDataset ds;
    ds.cols = 18;
    ds.feature_names = window_feature_names();
    ds.class_names = action_vocabulary();

    const std::size_t n_windows = (n - spec.window_len) / spec.stride + 1;
    ds.features.reserve(n_windows * ds.cols);
    ds.labels.reserve(n_windows);

    for (std::size_t w = 0; w < n_windows; ++w) {
        const std::size_t begin = w * spec.stride;
        const std::size_t end = begin + spec.window_len;
        const std::size_t len = spec.window_len;

        // per-axis mean/std/min/max
        for (std::size_t a = 0; a < 3; ++a) {
            double sum = 0, lo = rec.position[begin][a], hi = lo;
            for (std::size_t i = begin; i < end; ++i) {
                double v = rec.position[i][a];
                sum += v;
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            double mean = sum / static_cast<double>(len);
            double var = 0;
            for (std::size_t i = begin; i < end; ++i) {
                double d = rec.position[i][a] - mean;
                var += d * d;
            }
            var /= static_cast<double>(len);
            ds.features.push_back(mean);
            ds.features.push_back(std::sqrt(var));
            ds.features.push_back(lo);
            ds.features.push_back(hi);
        }

        double sp_sum = 0, sp_max = 0;
        for (std::size_t i = begin + 1; i < end; ++i) {
            double s = dist3(rec.position[i], rec.position[i - 1]);
            sp_sum += s;
            sp_max = std::max(sp_max, s);
        }
        ds.features.push_back(sp_sum / static_cast<double>(len - 1));
        ds.features.push_back(sp_max);

        double ac_sum = 0, ac_max = 0;
        for (std::size_t i = begin + 2; i < end; ++i) {
            double acc = 0;
            for (std::size_t a = 0; a < 3; ++a) {
                double d2 = rec.position[i][a] - 2 * rec.position[i - 1][a] +
                            rec.position[i - 2][a];
                acc += d2 * d2;
            }
            acc = std::sqrt(acc);
            ac_sum += acc;
            ac_max = std::max(ac_max, acc);
        }
        ds.features.push_back(len > 2 ? ac_sum / static_cast<double>(len - 2) : 0.0);
        ds.features.push_back(ac_max);

        // window range + deviation reuse the characteristics definitions
        std::array<double, 3> lo = rec.position[begin], hi = rec.position[begin],
                              centroid = {0, 0, 0};
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t a = 0; a < 3; ++a) {
                lo[a] = std::min(lo[a], rec.position[i][a]);
                hi[a] = std::max(hi[a], rec.position[i][a]);
                centroid[a] += rec.position[i][a];
            }
        }
        for (std::size_t a = 0; a < 3; ++a) centroid[a] /= static_cast<double>(len);
        ds.features.push_back(std::sqrt((hi[0] - lo[0]) * (hi[0] - lo[0]) +
                                        (hi[1] - lo[1]) * (hi[1] - lo[1]) +
                                        (hi[2] - lo[2]) * (hi[2] - lo[2])));
        double sq = 0;
        for (std::size_t i = begin; i < end; ++i) {
            double d = dist3(rec.position[i], centroid);
            sq += d * d;
        }
        ds.features.push_back(std::sqrt(sq / static_cast<double>(len)));

        // window label
        int label = 0;
        if (rec.has_labels()) {
            if (spec.label_rule == WindowLabelRule::Center) {
                label = rec.label_track[begin + len / 2];
            } else {
                std::map<int, std::size_t> votes;
                for (std::size_t i = begin; i < end; ++i) ++votes[rec.label_track[i]];
                std::size_t best = 0;
                for (const auto& [id, cnt] : votes)
                    if (cnt > best) { best = cnt; label = id; }
            }
        }
        ds.labels.push_back(label);
        ++ds.rows;
    }
    return ds;
}

}  // namespace trajml
