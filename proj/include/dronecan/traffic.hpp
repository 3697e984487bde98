#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dronecan/can_frame.hpp"
#include "dronecan/transfer.hpp"

namespace dronecan {

/// One periodic message in the synthetic bus population.
struct TrafficEntry {
    std::string name;
    std::uint16_t message_type_id = 0;
    std::uint8_t source_node_id = 1;
    std::uint8_t priority = 16;
    std::vector<std::uint8_t> payload_template;  ///< at most 11 bytes
    double rate_hz = 1.0;                         ///< transfers per second
    DsdlSignature signature{};

    [[nodiscard]] std::uint32_t can_id() const;
    [[nodiscard]] std::size_t frames_per_transfer() const noexcept
    {
        return frames_for_payload(payload_template.size());
    }

    bool operator==(const TrafficEntry&) const = default;
};

struct PhaseMultipliers {
    double boot = 1.0;
    double takeoff = 1.0;
    double cruise = 1.0;
    double landing = 1.0;

    bool operator==(const PhaseMultipliers&) const = default;
};

/// [0, boot_end) boot, [boot_end, takeoff_end) takeoff,
/// [takeoff_end, landing_start) cruise, [landing_start, ...) landing.
struct FlightPhases {
    Micros boot_end{0};
    Micros takeoff_end{0};
    Micros landing_start{0};

    [[nodiscard]] double multiplier_at(const PhaseMultipliers& m, Micros t) const noexcept;
};

inline constexpr std::size_t kMaxTemplatePayload = 11;

struct TrafficProfile {
    std::vector<TrafficEntry> catalog;
    PhaseMultipliers phases;
    /// Each period is scaled by a uniform factor in [1 - jitter, 1 + jitter].
    double jitter = 0.10;

    /// Throws Error{InvalidConfig} on empty catalog, non-positive rates or
    /// multipliers, oversize templates or jitter outside [0, 1).
    void validate() const;

    /// Frames per second with every multiplier at its cruise value.
    [[nodiscard]] double steady_state_frame_rate() const;
    /// Cruise-phase frames per second carried on one CAN id.
    [[nodiscard]] double frame_rate_for(std::uint32_t can_id) const;
    /// RawCommand plus every catalog signature.
    [[nodiscard]] SignatureRegistry signatures() const;

    /// Flight controller RawCommand at 100 Hz, four ESC status streams,
    /// a power status stream and node heartbeats; about 505 frames/s.
    static TrafficProfile default_profile();

    bool operator==(const TrafficProfile&) const = default;
};

/// Seed mixer used to derive independent streams from one user seed.
[[nodiscard]] std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Synthesizes benign traffic over [0, duration). Each catalog entry starts at
/// a random phase and is re-emitted every 1/(rate * phase multiplier) seconds
/// with uniform jitter; transfer ids count up mod 32 per entry. Without
/// `phases` the whole span is cruise. The result is sorted by timestamp with
/// ties in catalog order.
std::vector<CanFrame> normal_stream(const TrafficProfile& profile, Micros duration, std::uint64_t seed,
                                    std::optional<FlightPhases> phases = std::nullopt);

}  // namespace dronecan
