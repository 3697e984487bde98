#include "dronecan/dataset_io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>

namespace dronecan {
namespace {

constexpr char kLowerHex[] = "0123456789abcdef";
constexpr char kUpperHex[] = "0123456789ABCDEF";

void append_timestamp(std::string& out, Micros t)
{
    const auto us = t.count();
    std::array<char, 24> buf{};
    auto [p, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), us / 1'000'000);
    out.append(buf.data(), p);
    out += '.';
    auto frac = us % 1'000'000;
    char digits[6];
    for (int i = 5; i >= 0; --i) {
        digits[i] = static_cast<char>('0' + frac % 10);
        frac /= 10;
    }
    out.append(digits, 6);
}

void append_hex_id(std::string& out, std::uint32_t id, const char* alphabet)
{
    for (int shift = 28; shift >= 0; shift -= 4) {
        out += alphabet[(id >> shift) & 0xF];
    }
}

void append_hex_bytes(std::string& out, std::span<const std::uint8_t> bytes, const char* alphabet)
{
    for (auto b : bytes) {
        out += alphabet[b >> 4];
        out += alphabet[b & 0xF];
    }
}

int lower_hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

int any_hex_value(char c) noexcept
{
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return lower_hex_value(c);
}

/// "<digits>.<6 digits>" -> microseconds.
bool parse_timestamp(std::string_view s, Micros& out)
{
    const auto dot = s.find('.');
    if (dot == std::string_view::npos || dot == 0 || s.size() - dot - 1 != 6) {
        return false;
    }
    std::int64_t whole = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + dot, whole);
    if (ec != std::errc{} || p != s.data() + dot || whole < 0 || whole > 9'000'000'000'000LL) {
        return false;
    }
    std::int64_t frac = 0;
    for (char c : s.substr(dot + 1)) {
        if (c < '0' || c > '9') {
            return false;
        }
        frac = frac * 10 + (c - '0');
    }
    out = Micros{whole * 1'000'000 + frac};
    return true;
}

bool valid_interface(std::string_view s) noexcept
{
    if (s.empty()) {
        return false;
    }
    for (char c : s) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '#' || c == '(' || c == ')') {
            return false;
        }
    }
    return true;
}

std::vector<std::string_view> split_commas(std::string_view line)
{
    std::vector<std::string_view> fields;
    std::size_t from = 0;
    while (true) {
        const auto comma = line.find(',', from);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(from));
            return fields;
        }
        fields.push_back(line.substr(from, comma - from));
        from = comma + 1;
    }
}

void flush_or_throw(std::ostream& sink)
{
    sink.flush();
    if (!sink) {
        throw Error(Errc::SinkFailure, "output stream failed");
    }
}

template <class LineParser>
ReadResult read_lines(std::istream& source, ParseMode mode, bool expect_header, LineParser parse)
{
    ReadResult result;
    std::string line;
    std::size_t lineno = 0;
    std::size_t blank_run_start = 0;
    bool header_seen = !expect_header;

    auto report = [&](const ParseError& e) {
        if (mode == ParseMode::Strict) {
            throw e;
        }
        result.issues.push_back({e.line(), e.code(), e.what()});
    };

    while (std::getline(source, line)) {
        ++lineno;
        if (line.empty()) {
            if (blank_run_start == 0) {
                blank_run_start = lineno;
            }
            continue;
        }
        if (blank_run_start != 0) {
            // Blank lines are only tolerated at the end of the file.
            report(ParseError(Errc::MalformedLine, blank_run_start, "blank line inside data"));
            blank_run_start = 0;
        }
        if (!header_seen) {
            header_seen = true;
            if (line != kDatasetHeader) {
                report(ParseError(Errc::MalformedLine, lineno, "expected header '" + std::string(kDatasetHeader) + "'"));
            }
            continue;
        }
        try {
            result.records.push_back(parse(line, lineno));
        } catch (const ParseError& e) {
            report(e);
        }
    }
    if (!header_seen) {
        report(ParseError(Errc::MalformedLine, 1, "missing header"));
    }
    return result;
}

}  // namespace

std::string format_labeled_line(const DatasetRecord& r)
{
    std::string out;
    out.reserve(48);
    out += to_string(r.label);
    out += ',';
    append_timestamp(out, r.frame.timestamp());
    out += ',';
    out += r.interface;
    out += ',';
    append_hex_id(out, r.frame.id(), kLowerHex);
    out += ',';
    out += static_cast<char>('0' + r.frame.dlc());
    out += ',';
    append_hex_bytes(out, r.frame.data(), kLowerHex);
    return out;
}

std::size_t write_labeled(std::span<const DatasetRecord> records, std::ostream& sink)
{
    std::string buf;
    buf.reserve(1 << 16);
    buf += kDatasetHeader;
    buf += '\n';
    for (const auto& r : records) {
        buf += format_labeled_line(r);
        buf += '\n';
        if (buf.size() > (1 << 16) - 64) {
            sink.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    sink.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    flush_or_throw(sink);
    return records.size();
}

DatasetRecord parse_labeled_line(std::string_view text, std::size_t line)
{
    const auto fields = split_commas(text);
    if (fields.size() != 6) {
        throw ParseError(Errc::MalformedLine, line, "expected 6 fields, found " + std::to_string(fields.size()));
    }
    DatasetRecord rec;
    if (fields[0] == "Normal") {
        rec.label = Label::Normal;
    } else if (fields[0] == "Attack") {
        rec.label = Label::Attack;
    } else {
        throw ParseError(Errc::BadLabel, line, "label must be 'Normal' or 'Attack', got '" + std::string(fields[0]) + "'");
    }

    Micros t{};
    if (!parse_timestamp(fields[1], t)) {
        throw ParseError(Errc::MalformedLine, line, "bad timestamp '" + std::string(fields[1]) + "'");
    }
    if (!valid_interface(fields[2])) {
        throw ParseError(Errc::MalformedLine, line, "bad interface name");
    }
    rec.interface = std::string(fields[2]);

    if (fields[3].size() != 8) {
        throw ParseError(Errc::MalformedLine, line, "CAN id must be 8 hex digits");
    }
    std::uint32_t id = 0;
    for (char c : fields[3]) {
        const int v = lower_hex_value(c);
        if (v < 0) {
            throw ParseError(Errc::BadHex, line, "bad hex digit in CAN id");
        }
        id = (id << 4) | static_cast<std::uint32_t>(v);
    }
    if (id >= kCanIdLimit) {
        throw ParseError(Errc::MalformedLine, line, "CAN id exceeds 29 bits");
    }

    if (fields[4].size() != 1 || fields[4][0] < '0' || fields[4][0] > '8') {
        throw ParseError(Errc::MalformedLine, line, "dlc must be a digit 0-8");
    }
    const std::size_t dlc = static_cast<std::size_t>(fields[4][0] - '0');

    const auto hex = fields[5];
    if (hex.size() % 2 != 0) {
        throw ParseError(Errc::BadHex, line, "odd number of hex digits in data");
    }
    std::array<std::uint8_t, kMaxDlc> bytes{};
    const std::size_t n = hex.size() / 2;
    for (std::size_t i = 0; i < hex.size(); ++i) {
        if (lower_hex_value(hex[i]) < 0) {
            throw ParseError(Errc::BadHex, line, "bad hex digit in data");
        }
    }
    if (n != dlc) {
        throw ParseError(Errc::DlcMismatch, line,
                         "dlc " + std::to_string(dlc) + " but " + std::to_string(n) + " data bytes");
    }
    for (std::size_t i = 0; i < n; ++i) {
        bytes[i] = static_cast<std::uint8_t>(lower_hex_value(hex[2 * i]) << 4 | lower_hex_value(hex[2 * i + 1]));
    }
    rec.frame = make_frame(id, std::span(bytes.data(), n), t);
    return rec;
}

ReadResult read_labeled(std::istream& source, ParseMode mode)
{
    return read_lines(source, mode, true, parse_labeled_line);
}

std::size_t export_candump(std::span<const DatasetRecord> records, std::ostream& sink)
{
    std::string buf;
    buf.reserve(1 << 16);
    for (const auto& r : records) {
        buf += '(';
        append_timestamp(buf, r.frame.timestamp());
        buf += ") ";
        buf += r.interface;
        buf += ' ';
        append_hex_id(buf, r.frame.id(), kUpperHex);
        buf += '#';
        append_hex_bytes(buf, r.frame.data(), kUpperHex);
        buf += '\n';
        if (buf.size() > (1 << 16) - 64) {
            sink.write(buf.data(), static_cast<std::streamsize>(buf.size()));
            buf.clear();
        }
    }
    sink.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    flush_or_throw(sink);
    return records.size();
}

namespace {

DatasetRecord parse_candump_line(std::string_view text, std::size_t line)
{
    const auto bad = [&](const std::string& why) { return ParseError(Errc::MalformedLine, line, why); };
    if (text.empty() || text.front() != '(') {
        throw bad("expected '(' timestamp");
    }
    const auto close = text.find(") ");
    if (close == std::string_view::npos) {
        throw bad("unterminated timestamp");
    }
    DatasetRecord rec;
    Micros t{};
    if (!parse_timestamp(text.substr(1, close - 1), t)) {
        throw bad("bad timestamp");
    }
    const auto rest = text.substr(close + 2);
    const auto space = rest.find(' ');
    if (space == std::string_view::npos) {
        throw bad("missing frame field");
    }
    const auto iface = rest.substr(0, space);
    if (!valid_interface(iface)) {
        throw bad("bad interface name");
    }
    rec.interface = std::string(iface);
    const auto frame = rest.substr(space + 1);
    const auto hash = frame.find('#');
    if (hash != 8) {
        throw bad("expected 8-digit extended id before '#'");
    }
    std::uint32_t id = 0;
    for (char c : frame.substr(0, 8)) {
        const int v = any_hex_value(c);
        if (v < 0) {
            throw ParseError(Errc::BadHex, line, "bad hex digit in CAN id");
        }
        id = (id << 4) | static_cast<std::uint32_t>(v);
    }
    if (id >= kCanIdLimit) {
        throw bad("CAN id exceeds 29 bits");
    }
    const auto hex = frame.substr(9);
    if (hex.size() % 2 != 0 || hex.size() > 2 * kMaxDlc) {
        throw ParseError(Errc::BadHex, line, "data must be 0-8 hex byte pairs");
    }
    std::array<std::uint8_t, kMaxDlc> bytes{};
    for (std::size_t i = 0; i < hex.size() / 2; ++i) {
        const int hi = any_hex_value(hex[2 * i]);
        const int lo = any_hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) {
            throw ParseError(Errc::BadHex, line, "bad hex digit in data");
        }
        bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    rec.frame = make_frame(id, std::span(bytes.data(), hex.size() / 2), t);
    return rec;
}

}  // namespace

ReadResult read_candump(std::istream& source, ParseMode mode)
{
    return read_lines(source, mode, false, parse_candump_line);
}

}  // namespace dronecan
