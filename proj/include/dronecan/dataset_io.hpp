#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "dronecan/error.hpp"
#include "dronecan/scenario.hpp"

namespace dronecan {

// Labeled dataset format, one record per line after a fixed header:
//
//   label,timestamp,interface,can_id,dlc,data
//   Normal,0.000000,can0,05040601,8,a635000000000080
//
//   label     = "Normal" | "Attack"
//   timestamp = seconds "." 6 digits
//   interface = 1*(any byte except ',' and whitespace)
//   can_id    = 8 lowercase hex digits, value < 2^29
//   dlc       = one decimal digit 0..8
//   data      = 2*dlc lowercase hex digits
//
// Lines end in a single LF. Trailing blank lines are ignored on input.

/// The record carries its dlc through frame.dlc().
using DatasetRecord = TimedLabeledFrame;

inline constexpr std::string_view kDatasetHeader = "label,timestamp,interface,can_id,dlc,data";

/// Writes header plus one line per record and returns the record count.
/// Throws Error{SinkFailure} if the stream goes bad.
std::size_t write_labeled(std::span<const DatasetRecord> records, std::ostream& sink);

/// Formats one record without the trailing LF.
std::string format_labeled_line(const DatasetRecord& record);

enum class ParseMode {
    Strict,   ///< first error throws ParseError
    Lenient,  ///< bad lines are skipped and reported
};

struct ParseIssue {
    std::size_t line = 0;
    Errc code{};
    std::string message;
};

struct ReadResult {
    std::vector<DatasetRecord> records;
    std::vector<ParseIssue> issues;
};

/// Errors: MalformedLine (header, field count, timestamp, id, dlc), BadLabel,
/// BadHex, DlcMismatch; all positional.
ReadResult read_labeled(std::istream& source, ParseMode mode = ParseMode::Strict);

/// Parses one data line (no header, no LF). Throws ParseError tagged `line`.
DatasetRecord parse_labeled_line(std::string_view text, std::size_t line);

// candump -l log format: "(<sec>.<6 digits>) <iface> <8 HEX id>#<HEX data>"

/// Drops labels. Throws Error{SinkFailure}.
std::size_t export_candump(std::span<const DatasetRecord> records, std::ostream& sink);

/// Reads a candump log written by export_candump (or candump -l with extended
/// ids); every record is labeled Normal. Lenient mode skips bad lines.
ReadResult read_candump(std::istream& source, ParseMode mode = ParseMode::Strict);

}  // namespace dronecan
