#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dronecan/dataset_io.hpp"
#include "dronecan/traffic.hpp"

namespace dronecan {

/// Gaps between consecutive frames, in seconds. All zero with fewer than two
/// frames.
struct InterArrivalStats {
    std::size_t samples = 0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double stddev = 0.0;  ///< population standard deviation
};

struct DatasetSummary {
    Micros total_time{0};  ///< last timestamp minus first
    std::size_t normal_frames = 0;
    std::size_t attack_frames = 0;
    std::map<std::uint32_t, std::size_t> per_id_counts;
    InterArrivalStats overall;
    InterArrivalStats normal;  ///< gaps between consecutive Normal frames
    InterArrivalStats attack;  ///< gaps between consecutive Attack frames

    [[nodiscard]] std::size_t total_frames() const noexcept { return normal_frames + attack_frames; }
};

/// Throws Error{EmptyDataset}.
DatasetSummary summarize(std::span<const DatasetRecord> records);

/// Table layout for terminals.
std::string format_summary_table(const DatasetSummary& s);
/// One "key=value" per line, stable key order.
std::string format_summary_kv(const DatasetSummary& s);

struct AlarmWindow {
    Micros start{0};
    Micros end{0};

    bool operator==(const AlarmWindow&) const = default;
};

struct DetectorConfig {
    Micros window{1'000'000};
    /// Frames per second on target_id above which a window alarms.
    double threshold = 400.0;
    std::uint32_t target_id = kRawCommandCanId;
};

/// Twice the profile's cruise frame rate on the target id. The default
/// profile carries 200 RawCommand frames/s, giving the 400 frames/s default.
[[nodiscard]] double default_detection_threshold(const TrafficProfile& profile,
                                                 std::uint32_t target_id = kRawCommandCanId);

/// Tumbling windows [k*w, (k+1)*w) over frames carrying cfg.target_id; a
/// window whose rate exceeds the threshold raises an alarm and touching alarms
/// are merged. Throws Error{InvalidConfig} for non-positive window/threshold.
std::vector<AlarmWindow> detect_frequency(std::span<const DatasetRecord> records, const DetectorConfig& cfg = {});

struct DetectionScore {
    double precision = 1.0;
    double recall = 0.0;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    std::size_t true_negatives = 0;
};

/// A frame is predicted Attack iff its timestamp lies in some alarm
/// [start, end). With no positive predictions precision is 1.0; with no
/// Attack frames recall is 1.0 if nothing was missed.
DetectionScore evaluate_detection(std::span<const DatasetRecord> records, std::span<const AlarmWindow> alarms);

}  // namespace dronecan
