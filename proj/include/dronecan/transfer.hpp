#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "dronecan/can_frame.hpp"
#include "dronecan/can_id.hpp"

namespace dronecan {

// ---------------------------------------------------------------------------
// Tail byte: bit 7 start-of-transfer, bit 6 end-of-transfer, bit 5 toggle,
// bits 4..0 transfer id.

inline constexpr std::uint8_t kTransferIdModulo = 32;

struct TailByte {
    bool start_of_transfer = true;
    bool end_of_transfer = true;
    bool toggle = false;
    std::uint8_t transfer_id = 0;  ///< 0..31

    bool operator==(const TailByte&) const = default;
};

[[nodiscard]] constexpr TailByte single_frame_tail(std::uint8_t transfer_id) noexcept
{
    return {true, true, false, transfer_id};
}

/// Bits of transfer_id above bit 4 are dropped.
[[nodiscard]] constexpr std::uint8_t encode_tail(TailByte t) noexcept
{
    return static_cast<std::uint8_t>((t.start_of_transfer ? 0x80U : 0U) | (t.end_of_transfer ? 0x40U : 0U) |
                                     (t.toggle ? 0x20U : 0U) | (t.transfer_id & 0x1FU));
}

[[nodiscard]] constexpr TailByte decode_tail(std::uint8_t b) noexcept
{
    return {(b & 0x80U) != 0, (b & 0x40U) != 0, (b & 0x20U) != 0, static_cast<std::uint8_t>(b & 0x1FU)};
}

// ---------------------------------------------------------------------------
// Transfer CRC

/// 64-bit data type signature that seeds the transfer CRC.
struct DsdlSignature {
    std::uint64_t value = 0;

    auto operator<=>(const DsdlSignature&) const = default;
};

/// uavcan.equipment.esc.RawCommand
inline constexpr std::uint16_t kRawCommandTypeId = 1030;
inline constexpr DsdlSignature kRawCommandSignature{0x217f5c87d7ec951dULL};
/// Priority 5, RawCommand, node 1.
inline constexpr std::uint32_t kRawCommandCanId = 0x05040601;

/// Incremental CRC-16/CCITT-FALSE (poly 0x1021, init 0xFFFF, no reflection,
/// no final xor).
class TransferCrc {
public:
    TransferCrc() = default;
    explicit TransferCrc(DsdlSignature sig) noexcept { add_signature(sig); }

    void add(std::uint8_t byte) noexcept;
    void add(std::span<const std::uint8_t> bytes) noexcept;
    /// Feeds the eight signature bytes, least significant first.
    void add_signature(DsdlSignature sig) noexcept;

    [[nodiscard]] std::uint16_t value() const noexcept { return value_; }

private:
    std::uint16_t value_ = 0xFFFF;
};

[[nodiscard]] std::uint16_t compute_transfer_crc(DsdlSignature sig, std::span<const std::uint8_t> payload) noexcept;

// ---------------------------------------------------------------------------
// Segmentation

inline constexpr std::size_t kSingleFramePayload = 7;
inline constexpr std::size_t kFirstFramePayload = 5;
inline constexpr std::size_t kDefaultMaxTransferPayload = 256;

/// Number of CAN frames a payload of `length` bytes occupies.
[[nodiscard]] constexpr std::size_t frames_for_payload(std::size_t length) noexcept
{
    if (length <= kSingleFramePayload) {
        return 1;
    }
    return 1 + (length - kFirstFramePayload + kSingleFramePayload - 1) / kSingleFramePayload;
}

/// Splits a payload into the frames of one transfer. Payloads up to seven bytes
/// go out as one frame; longer ones get a little-endian CRC in the first frame
/// and alternating toggles from there on. Every frame carries `timestamp`.
///
/// Throws Error{WrongFrameKind} for anonymous payloads longer than seven bytes,
/// Error{PayloadTooLong} beyond `max_payload` and Error{FieldOverflow} for a
/// transfer id >= 32.
std::vector<CanFrame> split_transfer(const FrameId& fid, std::span<const std::uint8_t> payload,
                                     std::uint8_t transfer_id, DsdlSignature sig, Micros timestamp,
                                     std::size_t max_payload = kDefaultMaxTransferPayload);

// ---------------------------------------------------------------------------
// Reassembly

struct Transfer {
    FrameId frame_id;
    std::uint32_t can_id = 0;
    std::vector<std::uint8_t> payload;
    std::uint8_t transfer_id = 0;
    bool multi_frame = false;
    /// Only meaningful for multi-frame transfers; single frames report true.
    bool crc_ok = true;
    /// Timestamp of the frame that completed the transfer.
    Micros timestamp{0};

    bool operator==(const Transfer&) const = default;
};

enum class ReassemblyErrc {
    ToggleMismatch,
    TransferIdMismatch,
    OrphanContinuation,
    CrcMismatch,
    OutOfOrderTransferId,
    EmptyFrame,
    MalformedStart,
    AnonymousMultiFrame,
    UnknownSignature,
    PayloadTooLong,
};

std::string_view to_string(ReassemblyErrc code) noexcept;

struct ReassemblyDiagnostic {
    ReassemblyErrc kind{};
    std::uint32_t can_id = 0;
    Micros timestamp{0};

    bool operator==(const ReassemblyDiagnostic&) const = default;
};

using ReassemblyEvent = std::variant<Transfer, ReassemblyDiagnostic>;

/// Signatures the reassembler uses to verify multi-frame CRCs.
struct SignatureRegistry {
    std::map<std::uint16_t, DsdlSignature> messages;
    std::map<std::uint8_t, DsdlSignature> services;

    [[nodiscard]] std::optional<DsdlSignature> find(const FrameId& fid) const;

    /// RawCommand only.
    static SignatureRegistry with_raw_command();
};

struct ReassemblerOptions {
    SignatureRegistry signatures = SignatureRegistry::with_raw_command();
    /// Report OutOfOrderTransferId when a new transfer on a CAN id does not
    /// follow the previous one by exactly one (mod 32).
    bool strict_transfer_id = false;
    std::size_t max_payload = kDefaultMaxTransferPayload;
};

/// Stream reassembler with one slot per 29-bit CAN id. Errors are reported as
/// in-stream diagnostics; the affected open assembly is dropped and the stream
/// keeps going.
class Reassembler {
public:
    explicit Reassembler(ReassemblerOptions options = {});

    void push(const CanFrame& frame, std::vector<ReassemblyEvent>& out);
    [[nodiscard]] std::vector<ReassemblyEvent> push(const CanFrame& frame);

    [[nodiscard]] std::size_t open_assemblies() const noexcept { return slots_.size(); }

private:
    struct Slot {
        std::vector<std::uint8_t> payload;
        std::uint16_t expected_crc = 0;
        std::uint8_t transfer_id = 0;
        bool next_toggle = true;
    };

    void note_transfer_id(const CanFrame& frame, std::uint8_t tid, std::vector<ReassemblyEvent>& out);

    ReassemblerOptions options_;
    std::unordered_map<std::uint32_t, Slot> slots_;
    std::unordered_map<std::uint32_t, std::uint8_t> last_transfer_id_;
};

std::vector<ReassemblyEvent> reassemble(std::span<const CanFrame> frames, ReassemblerOptions options = {});

}  // namespace dronecan
