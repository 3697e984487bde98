#include "dronecan/transfer.hpp"

#include <algorithm>
#include <string>

#include "dronecan/error.hpp"

namespace dronecan {

void TransferCrc::add(std::uint8_t byte) noexcept
{
    value_ ^= static_cast<std::uint16_t>(byte << 8);
    for (int bit = 0; bit < 8; ++bit) {
        if ((value_ & 0x8000U) != 0) {
            value_ = static_cast<std::uint16_t>((value_ << 1) ^ 0x1021U);
        } else {
            value_ = static_cast<std::uint16_t>(value_ << 1);
        }
    }
}

void TransferCrc::add(std::span<const std::uint8_t> bytes) noexcept
{
    for (auto b : bytes) {
        add(b);
    }
}

void TransferCrc::add_signature(DsdlSignature sig) noexcept
{
    for (int i = 0; i < 8; ++i) {
        add(static_cast<std::uint8_t>(sig.value >> (8 * i)));
    }
}

std::uint16_t compute_transfer_crc(DsdlSignature sig, std::span<const std::uint8_t> payload) noexcept
{
    TransferCrc crc(sig);
    crc.add(payload);
    return crc.value();
}

std::vector<CanFrame> split_transfer(const FrameId& fid, std::span<const std::uint8_t> payload,
                                     std::uint8_t transfer_id, DsdlSignature sig, Micros timestamp,
                                     std::size_t max_payload)
{
    if (transfer_id >= kTransferIdModulo) {
        throw Error(Errc::FieldOverflow, "transfer id " + std::to_string(transfer_id) + " exceeds 5 bits");
    }
    if (payload.size() > max_payload) {
        throw Error(Errc::PayloadTooLong,
                    std::to_string(payload.size()) + " bytes exceeds limit " + std::to_string(max_payload));
    }
    const std::uint32_t can_id = encode_can_id(fid);

    std::vector<CanFrame> frames;
    std::array<std::uint8_t, kMaxDlc> buf{};

    if (payload.size() <= kSingleFramePayload) {
        std::copy(payload.begin(), payload.end(), buf.begin());
        buf[payload.size()] = encode_tail(single_frame_tail(transfer_id));
        frames.push_back(make_frame(can_id, std::span(buf.data(), payload.size() + 1), timestamp));
        return frames;
    }
    if (is_anonymous(fid)) {
        throw Error(Errc::WrongFrameKind, "anonymous transfers are limited to a single frame");
    }

    frames.reserve(frames_for_payload(payload.size()));
    const std::uint16_t crc = compute_transfer_crc(sig, payload);
    buf[0] = static_cast<std::uint8_t>(crc & 0xFFU);
    buf[1] = static_cast<std::uint8_t>(crc >> 8);
    std::copy_n(payload.begin(), kFirstFramePayload, buf.begin() + 2);
    buf[7] = encode_tail({true, false, false, transfer_id});
    frames.push_back(make_frame(can_id, buf, timestamp));

    bool toggle = true;
    for (std::size_t offset = kFirstFramePayload; offset < payload.size(); offset += kSingleFramePayload) {
        const std::size_t n = std::min(kSingleFramePayload, payload.size() - offset);
        const bool last = offset + n == payload.size();
        std::copy_n(payload.begin() + static_cast<std::ptrdiff_t>(offset), n, buf.begin());
        buf[n] = encode_tail({false, last, toggle, transfer_id});
        frames.push_back(make_frame(can_id, std::span(buf.data(), n + 1), timestamp));
        toggle = !toggle;
    }
    return frames;
}

std::string_view to_string(ReassemblyErrc code) noexcept
{
    switch (code) {
    case ReassemblyErrc::ToggleMismatch: return "ToggleMismatch";
    case ReassemblyErrc::TransferIdMismatch: return "TransferIdMismatch";
    case ReassemblyErrc::OrphanContinuation: return "OrphanContinuation";
    case ReassemblyErrc::CrcMismatch: return "CrcMismatch";
    case ReassemblyErrc::OutOfOrderTransferId: return "OutOfOrderTransferId";
    case ReassemblyErrc::EmptyFrame: return "EmptyFrame";
    case ReassemblyErrc::MalformedStart: return "MalformedStart";
    case ReassemblyErrc::AnonymousMultiFrame: return "AnonymousMultiFrame";
    case ReassemblyErrc::UnknownSignature: return "UnknownSignature";
    case ReassemblyErrc::PayloadTooLong: return "PayloadTooLong";
    }
    return "Unknown";
}

std::optional<DsdlSignature> SignatureRegistry::find(const FrameId& fid) const
{
    if (const auto* m = std::get_if<MessageId>(&fid)) {
        if (auto it = messages.find(m->message_type_id); it != messages.end()) {
            return it->second;
        }
    } else if (const auto* s = std::get_if<ServiceId>(&fid)) {
        if (auto it = services.find(s->service_type_id); it != services.end()) {
            return it->second;
        }
    }
    return std::nullopt;
}

SignatureRegistry SignatureRegistry::with_raw_command()
{
    SignatureRegistry r;
    r.messages.emplace(kRawCommandTypeId, kRawCommandSignature);
    return r;
}

Reassembler::Reassembler(ReassemblerOptions options) : options_(std::move(options)) {}

std::vector<ReassemblyEvent> Reassembler::push(const CanFrame& frame)
{
    std::vector<ReassemblyEvent> out;
    push(frame, out);
    return out;
}

void Reassembler::note_transfer_id(const CanFrame& frame, std::uint8_t tid, std::vector<ReassemblyEvent>& out)
{
    auto [it, inserted] = last_transfer_id_.try_emplace(frame.id(), tid);
    if (inserted) {
        return;
    }
    if (options_.strict_transfer_id && tid != (it->second + 1) % kTransferIdModulo) {
        out.emplace_back(ReassemblyDiagnostic{ReassemblyErrc::OutOfOrderTransferId, frame.id(), frame.timestamp()});
    }
    it->second = tid;
}

void Reassembler::push(const CanFrame& frame, std::vector<ReassemblyEvent>& out)
{
    const auto diag = [&](ReassemblyErrc kind) {
        out.emplace_back(ReassemblyDiagnostic{kind, frame.id(), frame.timestamp()});
    };

    const auto data = frame.data();
    if (data.empty()) {
        diag(ReassemblyErrc::EmptyFrame);
        return;
    }
    const TailByte tail = decode_tail(data.back());
    const auto body = data.first(data.size() - 1);

    if (tail.start_of_transfer) {
        // A new start always supersedes whatever was pending on this id.
        slots_.erase(frame.id());
        const FrameId fid = decode_can_id(frame.id());
        if (tail.end_of_transfer) {
            note_transfer_id(frame, tail.transfer_id, out);
            out.emplace_back(Transfer{
                .frame_id = fid,
                .can_id = frame.id(),
                .payload = {body.begin(), body.end()},
                .transfer_id = tail.transfer_id,
                .multi_frame = false,
                .crc_ok = true,
                .timestamp = frame.timestamp(),
            });
            return;
        }
        if (is_anonymous(fid)) {
            diag(ReassemblyErrc::AnonymousMultiFrame);
            return;
        }
        if (body.size() < 2) {
            diag(ReassemblyErrc::MalformedStart);
            return;
        }
        note_transfer_id(frame, tail.transfer_id, out);
        Slot slot;
        slot.expected_crc = static_cast<std::uint16_t>(body[0] | (body[1] << 8));
        slot.payload.assign(body.begin() + 2, body.end());
        slot.transfer_id = tail.transfer_id;
        slot.next_toggle = !tail.toggle;
        slots_.insert_or_assign(frame.id(), std::move(slot));
        return;
    }

    auto it = slots_.find(frame.id());
    if (it == slots_.end()) {
        diag(ReassemblyErrc::OrphanContinuation);
        return;
    }
    Slot& slot = it->second;
    if (tail.transfer_id != slot.transfer_id) {
        slots_.erase(it);
        diag(ReassemblyErrc::TransferIdMismatch);
        return;
    }
    if (tail.toggle != slot.next_toggle) {
        slots_.erase(it);
        diag(ReassemblyErrc::ToggleMismatch);
        return;
    }
    if (slot.payload.size() + body.size() > options_.max_payload) {
        slots_.erase(it);
        diag(ReassemblyErrc::PayloadTooLong);
        return;
    }
    slot.payload.insert(slot.payload.end(), body.begin(), body.end());
    slot.next_toggle = !slot.next_toggle;
    if (!tail.end_of_transfer) {
        return;
    }

    Transfer done{
        .frame_id = decode_can_id(frame.id()),
        .can_id = frame.id(),
        .payload = std::move(slot.payload),
        .transfer_id = slot.transfer_id,
        .multi_frame = true,
        .crc_ok = false,
        .timestamp = frame.timestamp(),
    };
    const std::uint16_t expected = slot.expected_crc;
    slots_.erase(it);

    const auto sig = options_.signatures.find(done.frame_id);
    if (!sig) {
        out.emplace_back(std::move(done));
        diag(ReassemblyErrc::UnknownSignature);
        return;
    }
    done.crc_ok = compute_transfer_crc(*sig, done.payload) == expected;
    const bool ok = done.crc_ok;
    out.emplace_back(std::move(done));
    if (!ok) {
        diag(ReassemblyErrc::CrcMismatch);
    }
}

std::vector<ReassemblyEvent> reassemble(std::span<const CanFrame> frames, ReassemblerOptions options)
{
    Reassembler r(std::move(options));
    std::vector<ReassemblyEvent> out;
    for (const auto& f : frames) {
        r.push(f, out);
    }
    return out;
}

}  // namespace dronecan
