#include "dronecan/can_id.hpp"

#include <sstream>

#include "dronecan/can_frame.hpp"
#include "dronecan/error.hpp"

namespace dronecan {
namespace {

constexpr std::uint32_t kSnmBit = 1U << 7;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void check_width(std::uint32_t value, unsigned width, const char* field)
{
    if (value >= (1U << width)) {
        throw Error(Errc::FieldOverflow, std::string(field) + "=" + std::to_string(value) + " exceeds " +
                                             std::to_string(width) + " bits");
    }
}

}  // namespace

FrameId decode_can_id(std::uint32_t id)
{
    if (id >= kCanIdLimit) {
        throw Error(Errc::IdOutOfRange, "CAN id " + std::to_string(id) + " exceeds 29 bits");
    }
    const auto priority = static_cast<std::uint8_t>((id >> 24) & 0x1FU);
    const auto source = static_cast<std::uint8_t>(id & 0x7FU);

    if ((id & kSnmBit) != 0) {
        return ServiceId{
            .priority = priority,
            .service_type_id = static_cast<std::uint8_t>((id >> 16) & 0xFFU),
            .request_not_response = ((id >> 15) & 1U) != 0,
            .destination_node_id = static_cast<std::uint8_t>((id >> 8) & 0x7FU),
            .source_node_id = source,
        };
    }
    if (source == 0) {
        return AnonymousMessageId{
            .priority = priority,
            .discriminator = static_cast<std::uint16_t>((id >> 10) & 0x3FFFU),
            .message_type_low = static_cast<std::uint8_t>((id >> 8) & 0x3U),
        };
    }
    return MessageId{
        .priority = priority,
        .message_type_id = static_cast<std::uint16_t>((id >> 8) & 0xFFFFU),
        .source_node_id = source,
    };
}

std::uint32_t encode_can_id(const FrameId& fid)
{
    return std::visit(
        overloaded{
            [](const MessageId& m) -> std::uint32_t {
                check_width(m.priority, 5, "priority");
                check_width(m.source_node_id, 7, "source_node_id");
                if (m.source_node_id == 0) {
                    throw Error(Errc::InvalidSource, "message frames need a non-zero source node; use AnonymousMessageId");
                }
                return (std::uint32_t{m.priority} << 24) | (std::uint32_t{m.message_type_id} << 8) | m.source_node_id;
            },
            [](const AnonymousMessageId& a) -> std::uint32_t {
                check_width(a.priority, 5, "priority");
                check_width(a.discriminator, 14, "discriminator");
                check_width(a.message_type_low, 2, "message_type_low");
                return (std::uint32_t{a.priority} << 24) | (std::uint32_t{a.discriminator} << 10) |
                       (std::uint32_t{a.message_type_low} << 8);
            },
            [](const ServiceId& s) -> std::uint32_t {
                check_width(s.priority, 5, "priority");
                check_width(s.destination_node_id, 7, "destination_node_id");
                check_width(s.source_node_id, 7, "source_node_id");
                return (std::uint32_t{s.priority} << 24) | (std::uint32_t{s.service_type_id} << 16) |
                       (s.request_not_response ? 1U << 15 : 0U) | (std::uint32_t{s.destination_node_id} << 8) |
                       kSnmBit | s.source_node_id;
            },
        },
        fid);
}

bool is_anonymous(const FrameId& fid) noexcept
{
    return std::holds_alternative<AnonymousMessageId>(fid);
}

std::string describe(const FrameId& fid)
{
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const MessageId& m) {
                       os << "Message{prio=" << int{m.priority} << " type=" << m.message_type_id
                          << " src=" << int{m.source_node_id} << '}';
                   },
                   [&](const AnonymousMessageId& a) {
                       os << "Anonymous{prio=" << int{a.priority} << " disc=" << a.discriminator
                          << " type_low=" << int{a.message_type_low} << '}';
                   },
                   [&](const ServiceId& s) {
                       os << "Service{prio=" << int{s.priority} << " type=" << int{s.service_type_id}
                          << " rnr=" << (s.request_not_response ? 1 : 0)
                          << " dst=" << int{s.destination_node_id} << " src=" << int{s.source_node_id} << '}';
                   },
               },
               fid);
    return os.str();
}

}  // namespace dronecan
