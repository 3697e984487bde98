// dronecan-ids: generate, decode, analyze and validate labeled DroneCAN
// intrusion datasets.
//
// Exit codes: 0 success, 1 data/validation errors, 2 usage errors.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dronecan/analysis.hpp"
#include "dronecan/attacks.hpp"
#include "dronecan/can_id.hpp"
#include "dronecan/dataset_io.hpp"
#include "dronecan/error.hpp"
#include "dronecan/scenario.hpp"
#include "dronecan/scenario_config.hpp"
#include "dronecan/traffic.hpp"
#include "dronecan/transfer.hpp"

namespace {

using namespace dronecan;

constexpr int kExitOk = 0;
constexpr int kExitData = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::uint64_t parse_number(const std::string& s)
{
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
        v = std::stoull(s, &used, 0);
    } catch (const std::exception&) {
        throw UsageError("not a number: " + s);
    }
    if (used != s.size()) {
        throw UsageError("not a number: " + s);
    }
    return v;
}

/// Keeps a file stream alive or hands out std::cin / std::cout for "-".
class Input {
public:
    explicit Input(const std::string& path)
    {
        if (path == "-") {
            stream_ = &std::cin;
            return;
        }
        file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
        if (!*file_) {
            throw UsageError("cannot open input '" + path + "'");
        }
        stream_ = file_.get();
    }
    std::istream& get() { return *stream_; }

private:
    std::unique_ptr<std::ifstream> file_;
    std::istream* stream_ = nullptr;
};

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path == "-") {
            stream_ = &std::cout;
            return;
        }
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary | std::ios::trunc);
        if (!*file_) {
            throw UsageError("cannot open output '" + path + "'");
        }
        stream_ = file_.get();
    }
    std::ostream& get() { return *stream_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* stream_ = nullptr;
};

std::vector<DatasetRecord> load_dataset(const std::string& path)
{
    Input in(path);
    return read_labeled(in.get(), ParseMode::Strict).records;
}

/// Accepts either the labeled format or a candump log.
RecordedTape load_tape(const std::string& path, std::uint32_t id_filter)
{
    Input in(path);
    std::ostringstream buf;
    buf << in.get().rdbuf();
    const std::string text = buf.str();
    std::istringstream ss(text);
    const bool labeled = text.compare(0, kDatasetHeader.size(), kDatasetHeader) == 0;
    const auto records = labeled ? read_labeled(ss).records : read_candump(ss).records;
    std::vector<CanFrame> frames;
    frames.reserve(records.size());
    for (const auto& r : records) {
        frames.push_back(r.frame);
    }
    return capture_tape(frames, id_filter);
}

// ---------------------------------------------------------------------------

struct GenerateOptions {
    std::optional<int> scenario;
    std::string spec_file;
    std::uint64_t seed = 0;
    std::string label_mode;
    std::string fidelity;
    std::string out = "-";
    std::string tape_file;
    std::string interface{kDefaultInterface};
    bool print_spec = false;
};

int run_generate(const GenerateOptions& o)
{
    ScenarioSpec spec;
    TrafficProfile profile = TrafficProfile::default_profile();
    if (o.scenario) {
        spec = builtin_scenario(*o.scenario);
    } else {
        auto file = load_scenario_config(o.spec_file);
        spec = std::move(file.spec);
        if (file.profile) {
            profile = std::move(*file.profile);
        }
    }
    if (o.label_mode == "origin") {
        spec.label_mode = LabelMode::OriginExact;
    } else if (o.label_mode == "window") {
        spec.label_mode = LabelMode::WindowBased;
    }
    if (!o.fidelity.empty()) {
        const Fidelity f = o.fidelity == "spec" ? Fidelity::SpecCorrect : Fidelity::ListingFaithful;
        for (auto& a : spec.attacks) {
            a.fidelity = f;
        }
    }
    if (o.print_spec) {
        Output out(o.out);
        out.get() << format_scenario_config(spec, &profile);
        return kExitOk;
    }

    std::optional<RecordedTape> tape;
    if (spec.has_replay()) {
        if (!o.tape_file.empty()) {
            const auto it = std::find_if(spec.attacks.begin(), spec.attacks.end(),
                                         [](const auto& a) { return a.kind == AttackKind::Replay; });
            tape = load_tape(o.tape_file, it->target_id);
        } else {
            tape = default_replay_tape(spec);
        }
    }

    const auto run = run_scenario(spec, profile, o.seed, tape ? &*tape : nullptr, o.interface);
    Output out(o.out);
    write_labeled(run.records, out.get());
    std::cerr << "scenario " << spec.id << ": " << run.records.size() << " frames (" << run.normal_generated
              << " benign, " << run.attack_generated << " injected), labels " << to_string(spec.label_mode) << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

std::string hex8(std::uint32_t v)
{
    std::ostringstream os;
    os << std::hex << std::setw(8) << std::setfill('0') << v;
    return os.str();
}

std::string bytes_hex(std::span<const std::uint8_t> bytes)
{
    std::ostringstream os;
    os << std::hex << std::setfill('0');
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        os << (i ? " " : "") << std::setw(2) << int{bytes[i]};
    }
    return os.str();
}

std::string describe_tail(std::uint8_t b)
{
    const TailByte t = decode_tail(b);
    std::ostringstream os;
    os << "tail{sot=" << t.start_of_transfer << " eot=" << t.end_of_transfer << " tog=" << t.toggle
       << " tid=" << int{t.transfer_id} << '}';
    return os.str();
}

void print_event(std::ostream& os, const ReassemblyEvent& ev)
{
    if (const auto* tr = std::get_if<Transfer>(&ev)) {
        os << "  => transfer " << describe(tr->frame_id) << " tid=" << int{tr->transfer_id}
           << (tr->multi_frame ? (tr->crc_ok ? " crc=ok" : " crc=BAD") : " single") << " payload["
           << tr->payload.size() << "] " << bytes_hex(tr->payload) << '\n';
    } else {
        const auto& d = std::get<ReassemblyDiagnostic>(ev);
        os << "  !! " << to_string(d.kind) << '\n';
    }
}

struct DecodeOptions {
    std::vector<std::string> ids;
    std::vector<std::string> tails;
    std::vector<std::string> frames;
    std::string input;
    bool transfers = false;
    bool strict_tid = false;
    std::size_t limit = 0;
};

int run_decode(const DecodeOptions& o)
{
    for (const auto& s : o.ids) {
        const auto id = parse_number(s);
        if (id >= kCanIdLimit) {
            throw UsageError("CAN id " + s + " exceeds 29 bits");
        }
        std::cout << hex8(static_cast<std::uint32_t>(id)) << "  " << describe(decode_can_id(static_cast<std::uint32_t>(id)))
                  << '\n';
    }
    for (const auto& s : o.tails) {
        const auto b = parse_number(s);
        if (b > 0xFF) {
            throw UsageError("tail byte " + s + " exceeds 8 bits");
        }
        std::cout << s << "  " << describe_tail(static_cast<std::uint8_t>(b)) << '\n';
    }

    ReassemblerOptions ropts;
    ropts.signatures = TrafficProfile::default_profile().signatures();
    ropts.strict_transfer_id = o.strict_tid;
    Reassembler reassembler(ropts);
    std::vector<ReassemblyEvent> events;

    const auto show = [&](const CanFrame& f, const char* label) {
        std::cout << std::fixed << std::setprecision(6) << to_seconds(f.timestamp()) << ' ' << label << ' '
                  << hex8(f.id()) << " [" << int{f.dlc()} << "] " << bytes_hex(f.data()) << "  "
                  << describe(decode_can_id(f.id()));
        if (f.dlc() > 0) {
            std::cout << ' ' << describe_tail(f.data().back());
        }
        std::cout << '\n';
        if (o.transfers) {
            events.clear();
            reassembler.push(f, events);
            for (const auto& ev : events) {
                print_event(std::cout, ev);
            }
        }
    };

    for (const auto& s : o.frames) {
        const auto hash = s.find('#');
        if (hash == std::string::npos || (s.size() - hash - 1) % 2 != 0) {
            throw UsageError("frame must look like 05040601#A635000000000080");
        }
        std::vector<std::uint8_t> data;
        for (std::size_t i = hash + 1; i < s.size(); i += 2) {
            data.push_back(static_cast<std::uint8_t>(parse_number("0x" + s.substr(i, 2))));
        }
        show(make_frame(static_cast<std::uint32_t>(parse_number("0x" + s.substr(0, hash))), data, Micros{0}), "-");
    }

    if (!o.input.empty()) {
        const auto records = load_dataset(o.input);
        std::size_t shown = 0;
        for (const auto& r : records) {
            if (o.limit != 0 && shown++ >= o.limit) {
                break;
            }
            show(r.frame, r.label == Label::Attack ? "A" : "N");
        }
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct AnalyzeOptions {
    std::vector<std::string> inputs;
    bool summary = false;
    std::vector<double> detect;
    std::string target_id = "0x05040601";
};

int run_analyze(const AnalyzeOptions& o)
{
    const bool do_summary = o.summary || o.detect.empty();
    for (const auto& path : o.inputs) {
        const auto records = load_dataset(path);
        if (o.inputs.size() > 1) {
            std::cout << "== " << path << '\n';
        }
        if (do_summary) {
            const auto s = summarize(records);
            std::cout << format_summary_table(s) << '\n' << format_summary_kv(s);
        }
        if (!o.detect.empty()) {
            DetectorConfig cfg;
            cfg.window = seconds_to_micros(o.detect.at(0));
            cfg.threshold = o.detect.at(1);
            cfg.target_id = static_cast<std::uint32_t>(parse_number(o.target_id));
            const auto alarms = detect_frequency(records, cfg);
            const auto score = evaluate_detection(records, alarms);
            std::cout << std::fixed << std::setprecision(6);
            for (const auto& a : alarms) {
                std::cout << "alarm " << to_seconds(a.start) << ' ' << to_seconds(a.end) << '\n';
            }
            std::cout << "alarms=" << alarms.size() << '\n'
                      << "precision=" << score.precision << '\n'
                      << "recall=" << score.recall << '\n'
                      << "tp=" << score.true_positives << " fp=" << score.false_positives
                      << " fn=" << score.false_negatives << " tn=" << score.true_negatives << '\n';
        }
    }
    return kExitOk;
}

int run_export(const std::string& input, const std::string& output)
{
    const auto records = load_dataset(input);
    Output out(output);
    export_candump(records, out.get());
    return kExitOk;
}

int run_validate(const std::vector<std::string>& inputs, bool lenient, bool candump)
{
    int status = kExitOk;
    for (const auto& path : inputs) {
        Input in(path);
        ReadResult result;
        try {
            result = candump ? read_candump(in.get(), lenient ? ParseMode::Lenient : ParseMode::Strict)
                             : read_labeled(in.get(), lenient ? ParseMode::Lenient : ParseMode::Strict);
        } catch (const ParseError& e) {
            std::cout << path << ':' << e.line() << ": " << e.what() << '\n';
            status = kExitData;
            continue;
        }
        for (const auto& issue : result.issues) {
            std::cout << path << ':' << issue.line << ": " << issue.message << '\n';
        }
        if (!result.issues.empty()) {
            status = kExitData;
        }
        std::cout << path << ": " << result.records.size() << " records, " << result.issues.size() << " issues\n";
    }
    return status;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DroneCAN intrusion dataset toolkit"};
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* generate = app.add_subcommand("generate", "Synthesize a labeled scenario dataset");
    auto* scenario_opt =
        generate->add_option("--scenario", gen.scenario, "Built-in scenario 1-10")->check(CLI::Range(1, 10));
    auto* spec_opt = generate->add_option("--spec", gen.spec_file, "Scenario definition file (JSON)")
                         ->check(CLI::ExistingFile);
    scenario_opt->excludes(spec_opt);
    generate->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    generate->add_option("--label-mode", gen.label_mode, "origin | window (default: from scenario)")
        ->check(CLI::IsMember({"origin", "window"}));
    generate->add_option("--fidelity", gen.fidelity, "listing | spec (default: from scenario)")
        ->check(CLI::IsMember({"listing", "spec"}));
    generate->add_option("--out,-o", gen.out, "Output file, '-' for stdout")->capture_default_str();
    generate->add_option("--tape", gen.tape_file, "Replay tape (labeled or candump file)");
    generate->add_option("--interface", gen.interface, "Interface column value")->capture_default_str();
    generate->add_flag("--print-spec", gen.print_spec, "Print the resolved scenario definition and exit");

    DecodeOptions dec;
    auto* decode = app.add_subcommand("decode", "Pretty-print CAN ids, tail bytes, frames or a dataset");
    decode->add_option("--id", dec.ids, "29-bit CAN id (hex with 0x or decimal)");
    decode->add_option("--tail", dec.tails, "Tail byte");
    decode->add_option("--frame", dec.frames, "Frame as ID#DATA");
    decode->add_option("input", dec.input, "Labeled dataset file");
    decode->add_flag("--transfers", dec.transfers, "Reassemble transfers and report diagnostics");
    decode->add_flag("--strict-tid", dec.strict_tid, "Report out-of-order transfer ids");
    decode->add_option("--limit", dec.limit, "Stop after N frames (0 = all)");

    AnalyzeOptions ana;
    auto* analyze = app.add_subcommand("analyze", "Summarize datasets or run the frequency detector");
    analyze->add_option("inputs", ana.inputs, "Labeled dataset files")->required();
    analyze->add_flag("--summary", ana.summary, "Print dataset metadata (default)");
    analyze->add_option("--detect", ana.detect, "WINDOW_SECONDS THRESHOLD_FPS")->expected(2);
    analyze->add_option("--target-id", ana.target_id, "CAN id watched by the detector")->capture_default_str();

    std::string export_in;
    std::string export_out = "-";
    auto* exporter = app.add_subcommand("export-candump", "Convert a labeled dataset to a candump log");
    exporter->add_option("input", export_in, "Labeled dataset file")->required();
    exporter->add_option("--out,-o", export_out, "Output file")->capture_default_str();

    std::vector<std::string> validate_in;
    bool lenient = false;
    bool candump = false;
    auto* validate = app.add_subcommand("validate", "Strictly check dataset files");
    validate->add_option("inputs", validate_in, "Files to check")->required();
    validate->add_flag("--lenient", lenient, "Report every bad line instead of stopping at the first");
    validate->add_flag("--candump", candump, "Inputs are candump logs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*generate) {
            if (!gen.scenario && gen.spec_file.empty()) {
                throw UsageError("generate needs --scenario or --spec");
            }
            return run_generate(gen);
        }
        if (*decode) {
            return run_decode(dec);
        }
        if (*analyze) {
            return run_analyze(ana);
        }
        if (*exporter) {
            return run_export(export_in, export_out);
        }
        if (*validate) {
            return run_validate(validate_in, lenient, candump);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const dronecan::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == Errc::UnknownScenario || e.code() == Errc::InvalidConfig ? kExitUsage : kExitData;
    }
    return kExitUsage;
}
