#include "dronecan/scenario.hpp"

#include <algorithm>
#include <string>

#include "dronecan/error.hpp"

namespace dronecan {
namespace {

constexpr Micros sec(std::int64_t s) noexcept { return Micros{s * 1'000'000}; }

constexpr Micros kFastInterval{1'500};
constexpr Micros kSlowInterval{5'000};

AttackConfig attack(AttackKind kind, std::int64_t from, std::int64_t to, Micros interval)
{
    AttackConfig cfg;
    cfg.kind = kind;
    cfg.start = sec(from);
    cfg.duration = sec(to - from);
    cfg.interval = interval;
    return cfg;
}

ScenarioSpec timeline(int id, std::int64_t total, std::int64_t boot, std::int64_t takeoff, std::int64_t landing)
{
    ScenarioSpec s;
    s.id = id;
    s.name = "scenario-" + std::to_string(id);
    s.total_time = sec(total);
    s.boot_end = sec(boot);
    s.takeoff_end = sec(takeoff);
    s.landing_start = sec(landing);
    return s;
}

ScenarioSpec three_windows(int id, AttackKind kind, Micros interval)
{
    auto s = timeline(id, 180, 20, 50, 170);
    for (auto [from, to] : {std::pair{50, 80}, std::pair{90, 120}, std::pair{130, 160}}) {
        s.attacks.push_back(attack(kind, from, to, interval));
    }
    return s;
}

}  // namespace

std::string_view to_string(Label label) noexcept
{
    return label == Label::Normal ? "Normal" : "Attack";
}

std::string_view to_string(LabelMode mode) noexcept
{
    return mode == LabelMode::OriginExact ? "OriginExact" : "WindowBased";
}

bool ScenarioSpec::has_replay() const noexcept
{
    return std::any_of(attacks.begin(), attacks.end(), [](const auto& a) { return a.kind == AttackKind::Replay; });
}

void ScenarioSpec::validate() const
{
    if (id < 0) {
        throw Error(Errc::InvalidConfig, "scenario id must be non-negative");
    }
    if (!(Micros{0} <= boot_end && boot_end <= takeoff_end && takeoff_end <= landing_start &&
          landing_start <= total_time) ||
        total_time.count() <= 0) {
        throw Error(Errc::InvalidConfig, "phase boundaries must satisfy 0 <= boot <= takeoff <= landing <= total");
    }
    std::vector<const AttackConfig*> ordered;
    for (const auto& a : attacks) {
        a.validate();
        if (a.start < takeoff_end || a.end() > landing_start) {
            throw Error(Errc::InvalidConfig, "attack window [" + std::to_string(to_seconds(a.start)) + ", " +
                                                 std::to_string(to_seconds(a.end())) +
                                                 ") lies outside the flight phase");
        }
        ordered.push_back(&a);
    }
    std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->start < b->start; });
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (ordered[i]->start < ordered[i - 1]->end()) {
            throw Error(Errc::InvalidConfig, "attack windows overlap");
        }
    }
}

ScenarioSpec builtin_scenario(int n)
{
    using enum AttackKind;
    ScenarioSpec s;
    switch (n) {
    case 1: s = three_windows(1, Flooding, kFastInterval); break;
    case 2: s = three_windows(2, Flooding, kSlowInterval); break;
    case 3: s = three_windows(3, Fuzzy, kFastInterval); break;
    case 4: s = three_windows(4, Fuzzy, kSlowInterval); break;
    case 5:
        s = timeline(5, 210, 30, 60, 200);
        s.attacks = {attack(Replay, 60, 100, kSlowInterval), attack(Replay, 110, 140, kSlowInterval),
                     attack(Replay, 160, 200, kSlowInterval)};
        s.note = "metadata table lists Fuzzy; timeline narrative describes Replay, which is used";
        break;
    case 6:
        s = timeline(6, 280, 30, 60, 270);
        s.attacks = {attack(Replay, 60, 100, kSlowInterval), attack(Replay, 110, 150, kSlowInterval),
                     attack(Replay, 170, 210, kSlowInterval), attack(Replay, 220, 260, kSlowInterval)};
        break;
    case 7:
        s = timeline(7, 240, 30, 50, 220);
        s.attacks = {attack(Flooding, 50, 90, kSlowInterval), attack(Fuzzy, 100, 130, kSlowInterval),
                     attack(Flooding, 140, 180, kSlowInterval), attack(Fuzzy, 190, 220, kSlowInterval)};
        break;
    case 8:
        s = timeline(8, 240, 30, 60, 230);
        s.attacks = {attack(Fuzzy, 60, 100, kSlowInterval), attack(Replay, 110, 140, kSlowInterval),
                     attack(Fuzzy, 150, 190, kSlowInterval), attack(Replay, 200, 230, kSlowInterval)};
        s.note = "narrative records shutdown at 250 s; metadata total time of 240 s is used";
        break;
    case 9:
        s = timeline(9, 270, 30, 60, 250);
        s.attacks = {attack(Flooding, 60, 110, kSlowInterval), attack(Replay, 120, 150, kSlowInterval),
                     attack(Flooding, 160, 200, kSlowInterval), attack(Replay, 210, 250, kSlowInterval)};
        s.note = "metadata table lists Fuzzy & Replay; timeline narrative describes Flooding & Replay, which is used";
        break;
    case 10:
        s = timeline(10, 220, 30, 60, 200);
        s.attacks = {attack(Flooding, 60, 110, kSlowInterval), attack(Fuzzy, 120, 160, kSlowInterval),
                     attack(Replay, 170, 200, kSlowInterval)};
        break;
    default:
        throw Error(Errc::UnknownScenario, "no built-in scenario " + std::to_string(n) + " (valid: 1-10)");
    }
    // Distinct default seeds per fuzzy window; run_scenario mixes in the user seed.
    for (std::size_t i = 0; i < s.attacks.size(); ++i) {
        s.attacks[i].seed = i;
    }
    return s;
}

ScenarioRun run_scenario(const ScenarioSpec& spec, const TrafficProfile& profile, std::uint64_t seed,
                         const RecordedTape* tape, std::string_view interface)
{
    spec.validate();
    if (spec.has_replay() && (tape == nullptr || tape->empty())) {
        throw Error(Errc::MissingTape, "scenario " + std::to_string(spec.id) + " contains a replay attack");
    }

    const auto normal = normal_stream(profile, spec.total_time, splitmix64(seed), spec.phases());

    std::vector<const AttackConfig*> order;
    for (const auto& a : spec.attacks) {
        order.push_back(&a);
    }
    std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->start < b->start; });

    std::vector<CanFrame> injected;
    for (std::size_t i = 0; i < order.size(); ++i) {
        AttackConfig cfg = *order[i];
        cfg.seed = splitmix64(seed ^ splitmix64(cfg.seed) ^ (0xA5A5A5A5ULL + i));
        auto frames = generate_attack(cfg, tape);
        injected.insert(injected.end(), frames.begin(), frames.end());
    }

    ScenarioRun run;
    run.normal_generated = normal.size();
    run.attack_generated = injected.size();
    run.records.reserve(normal.size() + injected.size());

    const std::string iface(interface);
    const auto in_window = [&](Micros t) {
        return std::any_of(order.begin(), order.end(), [t](auto* a) { return a->start <= t && t < a->end(); });
    };
    const auto emit = [&](const CanFrame& f, bool from_attack) {
        bool attack_label = from_attack;
        if (spec.label_mode == LabelMode::WindowBased) {
            attack_label = in_window(f.timestamp());
        }
        run.records.push_back({attack_label ? Label::Attack : Label::Normal, f, iface});
    };

    // Two-way merge; benign frames win ties.
    auto n = normal.begin();
    auto a = injected.begin();
    while (n != normal.end() || a != injected.end()) {
        if (a == injected.end() || (n != normal.end() && n->timestamp() <= a->timestamp())) {
            emit(*n++, false);
        } else {
            emit(*a++, true);
        }
    }
    return run;
}

RecordedTape default_replay_tape(const ScenarioSpec& spec)
{
    const AttackConfig* first = nullptr;
    Micros longest{0};
    for (const auto& a : spec.attacks) {
        if (a.kind == AttackKind::Replay) {
            first = first ? first : &a;
            longest = std::max(longest, a.duration);
        }
    }
    if (first == nullptr) {
        return {};
    }
    return synthetic_leftward_tape(longest + Micros{10'000'000}, first->interval);
}

}  // namespace dronecan
