#include "dronecan/scenario_config.hpp"

#include <fstream>
#include <sstream>

#include "dronecan/error.hpp"
#include "json.hpp"

namespace dronecan {
namespace {

using nlohmann::json;

std::uint64_t parse_hex(const json& j, const char* field)
{
    if (j.is_number_unsigned()) {
        return j.get<std::uint64_t>();
    }
    const auto s = j.get<std::string>();
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(s, &used, 0);
    if (used != s.size()) {
        throw Error(Errc::InvalidConfig, std::string("bad numeric value for ") + field + ": " + s);
    }
    return v;
}

std::string hex_string(std::uint64_t v, int width)
{
    std::ostringstream os;
    os << "0x" << std::hex;
    os.width(width);
    os.fill('0');
    os << v;
    return os.str();
}

Micros seconds_field(const json& j, const char* key)
{
    return seconds_to_micros(j.at(key).get<double>());
}

AttackKind parse_kind(const std::string& s)
{
    if (s == "flooding") return AttackKind::Flooding;
    if (s == "fuzzy") return AttackKind::Fuzzy;
    if (s == "replay") return AttackKind::Replay;
    throw Error(Errc::InvalidConfig, "unknown attack kind '" + s + "'");
}

std::string kind_name(AttackKind k)
{
    switch (k) {
    case AttackKind::Flooding: return "flooding";
    case AttackKind::Fuzzy: return "fuzzy";
    case AttackKind::Replay: return "replay";
    }
    return "?";
}

Fidelity parse_fidelity(const std::string& s)
{
    if (s == "listing") return Fidelity::ListingFaithful;
    if (s == "spec") return Fidelity::SpecCorrect;
    throw Error(Errc::InvalidConfig, "unknown fidelity '" + s + "' (listing|spec)");
}

LabelMode parse_label_mode(const std::string& s)
{
    if (s == "origin") return LabelMode::OriginExact;
    if (s == "window") return LabelMode::WindowBased;
    throw Error(Errc::InvalidConfig, "unknown label mode '" + s + "' (origin|window)");
}

std::vector<std::uint8_t> parse_payload(const std::string& hex)
{
    if (hex.size() % 2 != 0) {
        throw Error(Errc::InvalidConfig, "payload hex must have an even number of digits");
    }
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
    }
    return out;
}

std::string payload_hex(const std::vector<std::uint8_t>& bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    for (auto b : bytes) {
        s += digits[b >> 4];
        s += digits[b & 0xF];
    }
    return s;
}

AttackConfig attack_from_json(const json& j)
{
    AttackConfig a;
    a.kind = parse_kind(j.at("kind").get<std::string>());
    a.start = seconds_field(j, "start");
    a.duration = seconds_field(j, "duration");
    a.interval = seconds_field(j, "interval");
    a.seed = j.value("seed", std::uint64_t{0});
    a.fidelity = parse_fidelity(j.value("fidelity", std::string("listing")));
    if (j.contains("target_id")) {
        a.target_id = static_cast<std::uint32_t>(parse_hex(j.at("target_id"), "target_id"));
    }
    if (j.contains("signature")) {
        a.signature = DsdlSignature{parse_hex(j.at("signature"), "signature")};
    }
    return a;
}

ScenarioSpec spec_from_json(const json& j)
{
    ScenarioSpec s;
    s.id = j.value("id", 0);
    s.name = j.value("name", std::string("custom"));
    s.note = j.value("note", std::string());
    s.label_mode = parse_label_mode(j.value("label_mode", std::string("window")));
    s.total_time = seconds_field(j, "total_time");
    s.boot_end = seconds_field(j, "boot_end");
    s.takeoff_end = seconds_field(j, "takeoff_end");
    s.landing_start = seconds_field(j, "landing_start");
    for (const auto& a : j.value("attacks", json::array())) {
        s.attacks.push_back(attack_from_json(a));
    }
    s.validate();
    return s;
}

TrafficProfile profile_from_json(const json& j)
{
    TrafficProfile p;
    p.jitter = j.value("jitter", 0.10);
    if (j.contains("phases")) {
        const auto& ph = j.at("phases");
        p.phases.boot = ph.value("boot", 1.0);
        p.phases.takeoff = ph.value("takeoff", 1.0);
        p.phases.cruise = ph.value("cruise", 1.0);
        p.phases.landing = ph.value("landing", 1.0);
    }
    for (const auto& e : j.at("catalog")) {
        TrafficEntry entry;
        entry.name = e.value("name", std::string());
        entry.message_type_id = e.at("message_type_id").get<std::uint16_t>();
        entry.source_node_id = e.at("source_node_id").get<std::uint8_t>();
        entry.priority = e.value("priority", std::uint8_t{16});
        entry.rate_hz = e.at("rate_hz").get<double>();
        entry.payload_template = parse_payload(e.value("payload", std::string()));
        if (e.contains("signature")) {
            entry.signature = DsdlSignature{parse_hex(e.at("signature"), "signature")};
        }
        p.catalog.push_back(std::move(entry));
    }
    p.validate();
    return p;
}

}  // namespace

ScenarioFile parse_scenario_config(std::string_view text)
{
    try {
        const json root = json::parse(text);
        ScenarioFile f{spec_from_json(root.at("scenario")), std::nullopt};
        if (root.contains("profile")) {
            f.profile = profile_from_json(root.at("profile"));
        }
        return f;
    } catch (const json::exception& e) {
        throw Error(Errc::InvalidConfig, e.what());
    } catch (const std::logic_error& e) {
        // std::stoull / stoul failures
        throw Error(Errc::InvalidConfig, e.what());
    }
}

ScenarioFile load_scenario_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(Errc::InvalidConfig, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario_config(ss.str());
}

std::string format_scenario_config(const ScenarioSpec& spec, const TrafficProfile* profile)
{
    json s;
    s["id"] = spec.id;
    s["name"] = spec.name;
    if (!spec.note.empty()) {
        s["note"] = spec.note;
    }
    s["label_mode"] = spec.label_mode == LabelMode::OriginExact ? "origin" : "window";
    s["total_time"] = to_seconds(spec.total_time);
    s["boot_end"] = to_seconds(spec.boot_end);
    s["takeoff_end"] = to_seconds(spec.takeoff_end);
    s["landing_start"] = to_seconds(spec.landing_start);
    s["attacks"] = json::array();
    for (const auto& a : spec.attacks) {
        s["attacks"].push_back({
            {"kind", kind_name(a.kind)},
            {"start", to_seconds(a.start)},
            {"duration", to_seconds(a.duration)},
            {"interval", to_seconds(a.interval)},
            {"seed", a.seed},
            {"fidelity", a.fidelity == Fidelity::ListingFaithful ? "listing" : "spec"},
            {"target_id", hex_string(a.target_id, 8)},
            {"signature", hex_string(a.signature.value, 16)},
        });
    }
    json root;
    root["scenario"] = std::move(s);
    if (profile != nullptr) {
        json p;
        p["jitter"] = profile->jitter;
        p["phases"] = {{"boot", profile->phases.boot},
                       {"takeoff", profile->phases.takeoff},
                       {"cruise", profile->phases.cruise},
                       {"landing", profile->phases.landing}};
        p["catalog"] = json::array();
        for (const auto& e : profile->catalog) {
            p["catalog"].push_back({
                {"name", e.name},
                {"message_type_id", e.message_type_id},
                {"source_node_id", e.source_node_id},
                {"priority", e.priority},
                {"rate_hz", e.rate_hz},
                {"payload", payload_hex(e.payload_template)},
                {"signature", hex_string(e.signature.value, 16)},
            });
        }
        root["profile"] = std::move(p);
    }
    return root.dump(2) + "\n";
}

}  // namespace dronecan
