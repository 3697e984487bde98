#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dronecan/can_frame.hpp"
#include "dronecan/transfer.hpp"

namespace dronecan {

enum class AttackKind { Flooding, Fuzzy, Replay };

/// How the injected tail bytes are formed.
///  - ListingFaithful: the whole tail byte of both frames is overwritten with
///    the injection counter truncated to a byte, as the original attack
///    scripts do. Start/end/toggle flags are lost after the first injection.
///  - SpecCorrect: tails are {start,!end,toggle=0,k%32} and {!start,end,toggle=1,k%32}.
enum class Fidelity { ListingFaithful, SpecCorrect };

std::string_view to_string(AttackKind kind) noexcept;
std::string_view to_string(Fidelity fidelity) noexcept;

struct AttackConfig {
    AttackKind kind = AttackKind::Flooding;
    Micros start{0};
    Micros duration{0};
    /// Idle time between injections.
    Micros interval{0};
    /// Fuzzy only.
    std::uint64_t seed = 0;
    Fidelity fidelity = Fidelity::ListingFaithful;
    std::uint32_t target_id = kRawCommandCanId;
    DsdlSignature signature = kRawCommandSignature;

    [[nodiscard]] Micros end() const noexcept { return start + duration; }

    /// Throws Error{InvalidConfig} unless interval > 0, duration > 0, start >= 0
    /// and target_id fits 29 bits.
    void validate() const;

    bool operator==(const AttackConfig&) const = default;
};

/// Recorded bus traffic for replay. Timestamps are non-decreasing.
struct RecordedTape {
    std::vector<CanFrame> frames;

    [[nodiscard]] bool empty() const noexcept { return frames.empty(); }
};

/// Number of injections k with k * interval < duration.
[[nodiscard]] std::size_t injection_count(const AttackConfig& cfg);

/// Frames emitted by a flooding or fuzzy config (two per injection).
[[nodiscard]] std::size_t expected_frame_count(const AttackConfig& cfg);

/// Zero-payload RawCommand pair per injection, the CRC prefix is the fixed
/// A6 35 of an all-zero payload.
std::vector<CanFrame> flooding_stream(const AttackConfig& cfg);

/// Eleven random payload bytes per injection with a valid transfer CRC.
/// Bytes come from std::mt19937_64 seeded with cfg.seed, one draw per byte,
/// keeping the top eight bits, so streams are bit-identical across platforms.
std::vector<CanFrame> fuzzy_stream(const AttackConfig& cfg);

/// Re-emits tape frames at cfg.start plus their offset from the first tape
/// frame, rewriting the id to cfg.target_id. Stops at tape exhaustion or at
/// cfg.end(), whichever comes first. Throws Error{EmptyTape}.
std::vector<CanFrame> replay_stream(const RecordedTape& tape, const AttackConfig& cfg);

/// Keeps frames whose id equals id_filter.
RecordedTape capture_tape(std::span<const CanFrame> frames, std::uint32_t id_filter);

/// Dispatches on cfg.kind. `tape` is required for Replay (Error{MissingTape}).
std::vector<CanFrame> generate_attack(const AttackConfig& cfg, const RecordedTape* tape = nullptr);

/// Synthetic stand-in for a captured "steer left" RawCommand sequence: one
/// two-frame RawCommand transfer every `period`, with the throttle pattern
/// biased toward the right-hand motors. Not a real capture.
RecordedTape synthetic_leftward_tape(Micros length = Micros{50'000'000}, Micros period = Micros{5'000});

/// Packs up to six 14-bit signed ESC commands into the 11-byte RawCommand
/// payload used by the traffic model (LSB-first bit stream).
std::vector<std::uint8_t> pack_raw_command(std::span<const std::int16_t> commands);

}  // namespace dronecan
