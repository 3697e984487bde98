#include "dronecan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "dronecan/error.hpp"

namespace dronecan {
namespace {

// Welford accumulator over gaps.
class GapStats {
public:
    void observe(Micros t)
    {
        if (has_last_) {
            const double gap = to_seconds(t - last_);
            ++n_;
            const double delta = gap - mean_;
            mean_ += delta / static_cast<double>(n_);
            m2_ += delta * (gap - mean_);
            min_ = std::min(min_, gap);
            max_ = std::max(max_, gap);
        }
        last_ = t;
        has_last_ = true;
    }

    [[nodiscard]] InterArrivalStats result() const
    {
        if (n_ == 0) {
            return {};
        }
        return {n_, mean_, min_, max_, std::sqrt(std::max(0.0, m2_ / static_cast<double>(n_)))};
    }

private:
    bool has_last_ = false;
    Micros last_{0};
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
    double min_ = std::numeric_limits<double>::infinity();
    double max_ = 0.0;
};

void stats_kv(std::ostream& os, const char* prefix, const InterArrivalStats& s)
{
    os << prefix << ".samples=" << s.samples << '\n'
       << prefix << ".mean=" << s.mean << '\n'
       << prefix << ".min=" << s.min << '\n'
       << prefix << ".max=" << s.max << '\n'
       << prefix << ".stddev=" << s.stddev << '\n';
}

}  // namespace

DatasetSummary summarize(std::span<const DatasetRecord> records)
{
    if (records.empty()) {
        throw Error(Errc::EmptyDataset, "cannot summarize an empty dataset");
    }
    DatasetSummary s;
    GapStats all;
    GapStats normal;
    GapStats attack;
    for (const auto& r : records) {
        const Micros t = r.frame.timestamp();
        all.observe(t);
        if (r.label == Label::Attack) {
            ++s.attack_frames;
            attack.observe(t);
        } else {
            ++s.normal_frames;
            normal.observe(t);
        }
        ++s.per_id_counts[r.frame.id()];
    }
    s.total_time = records.back().frame.timestamp() - records.front().frame.timestamp();
    s.overall = all.result();
    s.normal = normal.result();
    s.attack = attack.result();
    return s;
}

std::string format_summary_table(const DatasetSummary& s)
{
    std::ostringstream os;
    os << std::fixed << std::setprecision(6);
    os << "Total time (s)      " << to_seconds(s.total_time) << '\n';
    os << "Normal / Attack     " << s.normal_frames << " / " << s.attack_frames << '\n';
    os << "Frames              " << s.total_frames() << '\n';
    os << '\n' << "Inter-arrival (s)   samples        mean         min         max      stddev\n";
    const auto row = [&](const char* name, const InterArrivalStats& st) {
        os << std::left << std::setw(20) << name << std::right << std::setw(7) << st.samples << std::setw(12)
           << st.mean << std::setw(12) << st.min << std::setw(12) << st.max << std::setw(12) << st.stddev << '\n';
    };
    row("  overall", s.overall);
    row("  normal", s.normal);
    row("  attack", s.attack);
    os << '\n' << "CAN id    frames\n";
    for (const auto& [id, count] : s.per_id_counts) {
        os << std::hex << std::setw(8) << std::setfill('0') << id << std::dec << std::setfill(' ') << "  "
           << count << '\n';
    }
    return os.str();
}

std::string format_summary_kv(const DatasetSummary& s)
{
    std::ostringstream os;
    os << std::setprecision(9);
    os << "total_time=" << to_seconds(s.total_time) << '\n'
       << "normal_frames=" << s.normal_frames << '\n'
       << "attack_frames=" << s.attack_frames << '\n';
    stats_kv(os, "inter_arrival.overall", s.overall);
    stats_kv(os, "inter_arrival.normal", s.normal);
    stats_kv(os, "inter_arrival.attack", s.attack);
    for (const auto& [id, count] : s.per_id_counts) {
        os << "id." << std::hex << std::setw(8) << std::setfill('0') << id << std::dec << std::setfill(' ') << '='
           << count << '\n';
    }
    return os.str();
}

double default_detection_threshold(const TrafficProfile& profile, std::uint32_t target_id)
{
    return 2.0 * profile.frame_rate_for(target_id);
}

std::vector<AlarmWindow> detect_frequency(std::span<const DatasetRecord> records, const DetectorConfig& cfg)
{
    if (cfg.window.count() <= 0 || !(cfg.threshold > 0.0)) {
        throw Error(Errc::InvalidConfig, "detector window and threshold must be positive");
    }
    std::map<std::int64_t, std::size_t> bins;
    for (const auto& r : records) {
        if (r.frame.id() == cfg.target_id) {
            ++bins[r.frame.timestamp().count() / cfg.window.count()];
        }
    }
    const double window_seconds = to_seconds(cfg.window);
    std::vector<AlarmWindow> alarms;
    for (const auto& [bin, count] : bins) {
        if (static_cast<double>(count) / window_seconds <= cfg.threshold) {
            continue;
        }
        const AlarmWindow w{cfg.window * bin, cfg.window * (bin + 1)};
        if (!alarms.empty() && alarms.back().end == w.start) {
            alarms.back().end = w.end;
        } else {
            alarms.push_back(w);
        }
    }
    return alarms;
}

DetectionScore evaluate_detection(std::span<const DatasetRecord> records, std::span<const AlarmWindow> alarms)
{
    // Normalize to sorted, non-overlapping intervals.
    std::vector<AlarmWindow> merged(alarms.begin(), alarms.end());
    std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.start < b.start; });
    std::size_t kept = 0;
    for (const auto& w : merged) {
        if (w.end <= w.start) {
            continue;
        }
        if (kept > 0 && w.start <= merged[kept - 1].end) {
            merged[kept - 1].end = std::max(merged[kept - 1].end, w.end);
        } else {
            merged[kept++] = w;
        }
    }
    merged.resize(kept);

    const auto alarmed = [&](Micros t) {
        auto it = std::upper_bound(merged.begin(), merged.end(), t,
                                   [](Micros v, const AlarmWindow& w) { return v < w.start; });
        return it != merged.begin() && t < std::prev(it)->end;
    };

    DetectionScore s;
    for (const auto& r : records) {
        const bool predicted = alarmed(r.frame.timestamp());
        const bool actual = r.label == Label::Attack;
        if (predicted && actual) {
            ++s.true_positives;
        } else if (predicted) {
            ++s.false_positives;
        } else if (actual) {
            ++s.false_negatives;
        } else {
            ++s.true_negatives;
        }
    }
    const auto predicted_pos = s.true_positives + s.false_positives;
    const auto actual_pos = s.true_positives + s.false_negatives;
    s.precision = predicted_pos == 0 ? 1.0 : static_cast<double>(s.true_positives) / static_cast<double>(predicted_pos);
    s.recall = actual_pos == 0 ? 1.0 : static_cast<double>(s.true_positives) / static_cast<double>(actual_pos);
    return s;
}

}  // namespace dronecan
