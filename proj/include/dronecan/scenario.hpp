#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dronecan/attacks.hpp"
#include "dronecan/can_frame.hpp"
#include "dronecan/traffic.hpp"

namespace dronecan {

enum class Label { Normal, Attack };

/// OriginExact: Attack iff the frame came from an attack generator.
/// WindowBased: Attack iff the frame falls inside an attack window
/// [start, start + duration), whatever its origin.
enum class LabelMode { OriginExact, WindowBased };

std::string_view to_string(Label label) noexcept;
std::string_view to_string(LabelMode mode) noexcept;

inline constexpr std::string_view kDefaultInterface = "can0";

struct TimedLabeledFrame {
    Label label = Label::Normal;
    CanFrame frame;
    std::string interface{kDefaultInterface};

    bool operator==(const TimedLabeledFrame&) const = default;
};

struct ScenarioSpec {
    int id = 0;
    std::string name;
    Micros total_time{0};
    Micros boot_end{0};
    Micros takeoff_end{0};
    Micros landing_start{0};
    std::vector<AttackConfig> attacks;
    LabelMode label_mode = LabelMode::WindowBased;
    /// Free text, e.g. known inconsistencies in the reference metadata.
    std::string note;

    [[nodiscard]] FlightPhases phases() const noexcept { return {boot_end, takeoff_end, landing_start}; }
    [[nodiscard]] bool has_replay() const noexcept;

    /// Throws Error{InvalidConfig} unless
    ///   0 <= boot_end <= takeoff_end <= landing_start <= total_time,
    ///   every attack is valid and lies inside [takeoff_end, landing_start],
    ///   and attack windows are pairwise disjoint.
    void validate() const;

    bool operator==(const ScenarioSpec&) const = default;
};

inline constexpr int kBuiltinScenarioCount = 10;

/// The ten reference scenario timelines. Throws Error{UnknownScenario}.
ScenarioSpec builtin_scenario(int n);

/// Synthetic tape long enough for every Replay window of `spec`, paced at the
/// first Replay interval. Empty when the spec has no Replay attack.
RecordedTape default_replay_tape(const ScenarioSpec& spec);

struct ScenarioRun {
    std::vector<TimedLabeledFrame> records;
    std::size_t normal_generated = 0;
    std::size_t attack_generated = 0;
};

/// Merges benign traffic over [0, total_time) with every attack stream,
/// ordered by timestamp with benign frames first on ties, and labels the
/// result per spec.label_mode. `tape` must be supplied when the spec contains
/// a Replay attack (Error{MissingTape}).
ScenarioRun run_scenario(const ScenarioSpec& spec, const TrafficProfile& profile, std::uint64_t seed,
                         const RecordedTape* tape = nullptr, std::string_view interface = kDefaultInterface);

}  // namespace dronecan
