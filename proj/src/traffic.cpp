#include "dronecan/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dronecan/attacks.hpp"
#include "dronecan/error.hpp"

namespace dronecan {
namespace {

// Public DroneCAN data type signatures for the status messages in the
// default catalog.
constexpr DsdlSignature kEscStatusSignature{0xA9AF28AEA2FBB254ULL};
constexpr DsdlSignature kNodeStatusSignature{0x0F0868D0C1A7C6F1ULL};

constexpr std::uint16_t kEscStatusTypeId = 1034;
constexpr std::uint16_t kCircuitStatusTypeId = 1091;
constexpr std::uint16_t kNodeStatusTypeId = 341;

double unit_uniform(std::mt19937_64& rng) noexcept
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::uint32_t TrafficEntry::can_id() const
{
    return encode_can_id(MessageId{priority, message_type_id, source_node_id});
}

double FlightPhases::multiplier_at(const PhaseMultipliers& m, Micros t) const noexcept
{
    if (t < boot_end) {
        return m.boot;
    }
    if (t < takeoff_end) {
        return m.takeoff;
    }
    if (t < landing_start) {
        return m.cruise;
    }
    return m.landing;
}

void TrafficProfile::validate() const
{
    if (catalog.empty()) {
        throw Error(Errc::InvalidConfig, "traffic catalog is empty");
    }
    for (const auto& e : catalog) {
        if (!(e.rate_hz > 0.0) || !std::isfinite(e.rate_hz)) {
            throw Error(Errc::InvalidConfig, "entry '" + e.name + "' needs a positive finite rate");
        }
        if (e.payload_template.size() > kMaxTemplatePayload) {
            throw Error(Errc::InvalidConfig, "entry '" + e.name + "' payload template exceeds 11 bytes");
        }
        (void)e.can_id();
    }
    for (double m : {phases.boot, phases.takeoff, phases.cruise, phases.landing}) {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw Error(Errc::InvalidConfig, "phase multipliers must be positive");
        }
    }
    if (!(jitter >= 0.0 && jitter < 1.0)) {
        throw Error(Errc::InvalidConfig, "jitter must lie in [0, 1)");
    }
}

double TrafficProfile::steady_state_frame_rate() const
{
    double rate = 0.0;
    for (const auto& e : catalog) {
        rate += e.rate_hz * static_cast<double>(e.frames_per_transfer());
    }
    return rate * phases.cruise;
}

double TrafficProfile::frame_rate_for(std::uint32_t can_id) const
{
    double rate = 0.0;
    for (const auto& e : catalog) {
        if (e.can_id() == can_id) {
            rate += e.rate_hz * static_cast<double>(e.frames_per_transfer());
        }
    }
    return rate * phases.cruise;
}

SignatureRegistry TrafficProfile::signatures() const
{
    auto reg = SignatureRegistry::with_raw_command();
    for (const auto& e : catalog) {
        reg.messages.try_emplace(e.message_type_id, e.signature);
    }
    return reg;
}

TrafficProfile TrafficProfile::default_profile()
{
    TrafficProfile p;
    const std::array<std::int16_t, 4> hover{4500, 4500, 4500, 4500};
    p.catalog.push_back({
        .name = "esc.RawCommand",
        .message_type_id = kRawCommandTypeId,
        .source_node_id = 1,
        .priority = 5,
        .payload_template = pack_raw_command(hover),
        .rate_hz = 100.0,
        .signature = kRawCommandSignature,
    });
    for (std::uint8_t esc = 0; esc < 4; ++esc) {
        p.catalog.push_back({
            .name = "esc.Status#" + std::to_string(esc),
            .message_type_id = kEscStatusTypeId,
            .source_node_id = static_cast<std::uint8_t>(20 + esc),
            .priority = 16,
            // error count, voltage, current, temperature, rpm, power/index
            .payload_template = {0x00, 0x00, 0x00, 0x00, 0x66, 0x4E, 0x00, 0x3C, 0x9A, 0x5C, esc},
            .rate_hz = 25.0,
            .signature = kEscStatusSignature,
        });
    }
    p.catalog.push_back({
        .name = "power.CircuitStatus",
        .message_type_id = kCircuitStatusTypeId,
        .source_node_id = 1,
        .priority = 16,
        .payload_template = {0x00, 0x00, 0x66, 0x4E, 0x00, 0x3C, 0x00},
        .rate_hz = 100.0,
        .signature = {},
    });
    for (std::uint8_t node : {1, 20, 21, 22, 23}) {
        p.catalog.push_back({
            .name = "protocol.NodeStatus@" + std::to_string(node),
            .message_type_id = kNodeStatusTypeId,
            .source_node_id = node,
            .priority = 24,
            .payload_template = {0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00},
            .rate_hz = 1.0,
            .signature = kNodeStatusSignature,
        });
    }
    p.phases = {.boot = 0.8, .takeoff = 1.1, .cruise = 1.0, .landing = 1.0};
    return p;
}

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::vector<CanFrame> normal_stream(const TrafficProfile& profile, Micros duration, std::uint64_t seed,
                                    std::optional<FlightPhases> phases)
{
    profile.validate();
    std::vector<CanFrame> out;
    if (duration.count() <= 0) {
        return out;
    }
    const FlightPhases timeline = phases.value_or(FlightPhases{Micros{0}, Micros{0}, duration});
    const double horizon = to_seconds(duration);

    for (std::size_t i = 0; i < profile.catalog.size(); ++i) {
        const TrafficEntry& entry = profile.catalog[i];
        const FrameId fid = MessageId{entry.priority, entry.message_type_id, entry.source_node_id};
        std::mt19937_64 rng(splitmix64(seed ^ splitmix64(i + 1)));

        const double base_period = 1.0 / entry.rate_hz;
        double t = base_period * unit_uniform(rng);
        std::uint8_t tid = 0;
        while (t < horizon) {
            const Micros stamp = seconds_to_micros(t);
            if (stamp >= duration) {
                break;
            }
            for (auto& f : split_transfer(fid, entry.payload_template, tid, entry.signature, stamp)) {
                out.push_back(std::move(f));
            }
            tid = static_cast<std::uint8_t>((tid + 1) % kTransferIdModulo);
            const double period = base_period / timeline.multiplier_at(profile.phases, stamp);
            t += period * (1.0 + profile.jitter * (2.0 * unit_uniform(rng) - 1.0));
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const CanFrame& a, const CanFrame& b) { return a.timestamp() < b.timestamp(); });
    return out;
}

}  // namespace dronecan
