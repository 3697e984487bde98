#pragma once

#include <cstdint>
#include <string>
#include <variant>

namespace dronecan {

// UAVCAN v0 29-bit identifier layouts. Bit 7 is service-not-message.
//
//   Message    [28:24] priority  [23:8] message type id          [7]=0 [6:0] source (!= 0)
//   Anonymous  [28:24] priority  [23:10] discriminator [9:8] type  [7]=0 [6:0] 0
//   Service    [28:24] priority  [23:16] service type  [15] request-not-response
//              [14:8] destination                                 [7]=1 [6:0] source
//
// Priority is kept as plain numeric metadata; no ordering is implied.

struct MessageId {
    std::uint8_t priority = 0;
    std::uint16_t message_type_id = 0;
    std::uint8_t source_node_id = 1;

    bool operator==(const MessageId&) const = default;
};

struct AnonymousMessageId {
    std::uint8_t priority = 0;
    std::uint16_t discriminator = 0;
    std::uint8_t message_type_low = 0;

    bool operator==(const AnonymousMessageId&) const = default;
};

struct ServiceId {
    std::uint8_t priority = 0;
    std::uint8_t service_type_id = 0;
    bool request_not_response = false;
    std::uint8_t destination_node_id = 0;
    std::uint8_t source_node_id = 0;

    bool operator==(const ServiceId&) const = default;
};

using FrameId = std::variant<MessageId, AnonymousMessageId, ServiceId>;

/// Total over [0, 2^29): SNM=1 is a service frame, SNM=0 with source 0 is
/// anonymous, anything else a regular message. Throws Error{IdOutOfRange}.
FrameId decode_can_id(std::uint32_t id);

/// Inverse of decode_can_id. Throws Error{FieldOverflow} when a field does not
/// fit its width and Error{InvalidSource} for a MessageId with source 0.
std::uint32_t encode_can_id(const FrameId& fid);

[[nodiscard]] bool is_anonymous(const FrameId& fid) noexcept;

/// Human-readable one-liner, e.g. "Message{prio=5 type=1030 src=1}".
std::string describe(const FrameId& fid);

}  // namespace dronecan
