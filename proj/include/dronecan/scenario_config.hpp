#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "dronecan/scenario.hpp"
#include "dronecan/traffic.hpp"

namespace dronecan {

/// A scenario definition file: a scenario and, optionally, a traffic profile.
///
/// {
///   "scenario": {
///     "id": 11, "name": "custom", "label_mode": "window",      // or "origin"
///     "total_time": 120, "boot_end": 10, "takeoff_end": 30, "landing_start": 110,
///     "attacks": [
///       { "kind": "flooding", "start": 40, "duration": 20, "interval": 0.005,
///         "fidelity": "listing", "seed": 7,                       // optional
///         "target_id": "0x05040601", "signature": "0x217f5c87d7ec951d" }
///     ]
///   },
///   "profile": {
///     "jitter": 0.1,
///     "phases": { "boot": 0.8, "takeoff": 1.1, "cruise": 1.0, "landing": 1.0 },
///     "catalog": [
///       { "name": "esc.RawCommand", "message_type_id": 1030, "source_node_id": 1,
///         "priority": 5, "rate_hz": 100, "payload": "0000000000000000000000",
///         "signature": "0x217f5c87d7ec951d" }
///     ]
///   }
/// }
///
/// Times are seconds (rounded to microseconds). Hex fields are strings.
struct ScenarioFile {
    ScenarioSpec spec;
    std::optional<TrafficProfile> profile;
};

/// Throws Error{InvalidConfig} on syntax errors, unknown enum strings, missing
/// fields or a spec that fails validation.
ScenarioFile parse_scenario_config(std::string_view text);
ScenarioFile load_scenario_config(const std::filesystem::path& path);

std::string format_scenario_config(const ScenarioSpec& spec, const TrafficProfile* profile = nullptr);

}  // namespace dronecan
